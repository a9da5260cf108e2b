#include "cli.hpp"

int main(int argc, char** argv) { return osc::cli::main_with_args(argc, argv); }
