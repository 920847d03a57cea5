#include "carpets/cli.hpp"

int main(int argc, char** argv) { return carpets::run_cli(argc, argv); }
