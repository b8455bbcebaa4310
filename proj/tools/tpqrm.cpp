#include "tpqrm/cli.hpp"

int main(int argc, char** argv) { return tpqrm::cli::main(argc, argv); }
