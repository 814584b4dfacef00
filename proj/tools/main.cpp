#include "tjeffreys/experiment.hpp"

int main(int argc, char** argv) { return tjeffreys::experiment::run_cli(argc, argv); }
