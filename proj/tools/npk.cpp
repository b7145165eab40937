#include "npk/cli_app.hpp"

int main(int argc, char** argv) { return npk::cli::run(argc, argv); }
