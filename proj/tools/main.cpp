#include "acet/cli.hpp"

int main(int argc, char** argv) { return acet::cli::run(argc, argv); }
