#include "bussgang/cli.hpp"

int main(int argc, char** argv) {
    return bussgang::run_cli(argc, argv);
}
