#include "prosogate/cli/app.hpp"

int main(int argc, char** argv) { return prosogate::cli::run(argc, argv); }
