#include "mqcic/cli/app.hpp"

int main(int argc, char** argv) { return mqcic::cli::dispatch(argc, argv); }
