#include "carath/cli.hpp"

int main(int argc, char** argv) { return carath::cli::dispatch(argc, argv, std::cout); }
