#include "spectral_mazur/cli.hpp"

int main(int argc, char** argv) { return spectral_mazur::cli::run(argc, argv); }
