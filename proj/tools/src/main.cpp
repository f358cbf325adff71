#include "fracvac_cli/app.hpp"

int main(int argc, char** argv) { return fracvac::cli::run(argc, argv); }
