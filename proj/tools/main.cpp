#include "cli.hpp"

int main(int argc, char** argv) { return voxrep::cli::run(argc, argv); }
