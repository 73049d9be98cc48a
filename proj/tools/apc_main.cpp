#include "apc/harness.hpp"

int main(int argc, char** argv) { return apc::cli_main(argc, argv); }
