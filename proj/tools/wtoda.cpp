#include "wtoda/cli.hpp"

int main(int argc, char** argv) { return wtoda::run_cli(argc, argv); }
