#include "biaslens/cli.hpp"

int main(int argc, char** argv) { return biaslens::cli::run(argc, argv); }
