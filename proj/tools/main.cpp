// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return specinv::cli::Run({argv + 1, argv + argc}, std::cout, std::cerr);
}
