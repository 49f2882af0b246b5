#include "degenelab/cli.hpp"

int main(int argc, char** argv)
{
    return degenelab::cli_main(argc, argv);
}
