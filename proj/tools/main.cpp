#include "commands.hpp"

int main(int argc, char** argv) { return skelrot::cli::run_cli(argc, argv); }
