#include "coinknn/cli.hpp"

int main(int argc, char** argv) { return coinknn::cli::run(argc, argv); }
