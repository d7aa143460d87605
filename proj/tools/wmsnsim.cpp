#include "wmsn/cli_ops.hpp"

int main(int argc, char** argv) { return wmsn::cli_main(argc, argv); }
