#include "fpp/cli.hpp"

int main(int argc, char** argv) {
    return fpp::cli_main({argv + 1, argv + argc});
}
