#pragma once

#include <cstdint>
#include <string>

namespace hcforge {

struct BenchReport {
  std::string csv;
  long long violations = 0;  // informational rows excluded
};

// Property batteries behind the `bench` subcommand: "lemmas", "approx",
// "oracles". Child seeds derive from the master seed by counter, trials are
// folded by index, so equal seeds yield byte-identical CSV at any worker
// count.
BenchReport run_bench_suite(const std::string& suite, std::uint64_t seed);

}  // namespace hcforge
