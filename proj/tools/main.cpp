#include "dmmf/cli.hpp"

int main(int argc, char** argv) { return dmmf::run_cli(argc, argv); }
