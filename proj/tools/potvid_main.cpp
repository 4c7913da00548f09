#include "potvid/cli.hpp"

int main(int argc, char** argv) {
    return potvid::cli_dispatch({argv + 1, argv + argc});
}
