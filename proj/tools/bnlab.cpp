#include "bnlab/cli.hpp"

int main(int argc, char** argv) { return bnlab::run(argc, argv); }
