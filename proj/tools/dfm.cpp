#include <dfm/cli.hpp>

int main(int argc, char** argv) { return dfm::run(argc, argv, std::cout, std::cerr); }
