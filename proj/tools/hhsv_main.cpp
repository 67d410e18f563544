#include "hhsv/cli.hpp"

int main(int argc, char** argv) {
    return hhsv::cli::run(argc, argv);
}
