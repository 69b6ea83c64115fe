#include "ergo/cli.hpp"

int main(int argc, char** argv) { return ergo::cli::main_entry(argc, argv); }
