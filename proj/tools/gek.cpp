#include "gek/cli.hpp"

int main(int argc, char** argv) { return gek::run(argc, argv); }
