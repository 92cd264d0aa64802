#include "gevrey/cli.hpp"

int main(int argc, char** argv) { return gevrey::cli::run(argc, argv); }
