#include "cli.hpp"

int main(int argc, char** argv) {
    return scdepth::cli::dispatch(argc, argv);
}
