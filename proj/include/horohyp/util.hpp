#ifndef HOROHYP_UTIL_HPP
#define HOROHYP_UTIL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace horohyp {

/// Deterministic cross-platform PRNG (splitmix64). Any sampling an
/// operation performs is seeded from the scenario, never from the clock.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
bool parse_int(const std::string& s, long& out);

}  // namespace horohyp

#endif
