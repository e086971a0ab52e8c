#include "restor/cli.hpp"

int main(int argc, char** argv) { return restor::dispatch(argc, argv); }
