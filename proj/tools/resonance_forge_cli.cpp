#include <resonance_forge/cli.hpp>

int main(int argc, char** argv) { return rf::cli::run(argc, argv); }
