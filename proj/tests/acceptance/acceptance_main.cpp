#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "issglf/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-9, one line each"};
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "RNG seed for the sampled criteria")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto out = issglf::acceptance::verify(issglf::acceptance::Suite::All, seed);
    std::cout << out.report;
    return out.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
}
