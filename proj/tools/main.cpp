#include "rankweight/cli.hpp"

int main(int argc, char** argv) { return rankweight::cli::dispatch(argc, argv); }
