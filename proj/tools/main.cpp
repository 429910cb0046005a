#include "corrfit/cli.hpp"

int main(int argc, char** argv) { return corrfit::cli_main(argc, argv); }
