#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "htmab/clip.hpp"

namespace htmab {

enum class VerifyLevel { Quick, Full };

struct VerifyEntry {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::Quick;
  std::vector<VerifyEntry> entries;

  bool passed() const;
  std::size_t failures() const;
  std::string to_json() const;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  std::uint64_t seed = 12345;
  // Clip used by the clip-lemma suites; replaceable for mutation checks.
  ScalarClip clip = clip_norm_1d;
};

// Monte-Carlo sample count per suite: 1e4 (quick) or 1e6 (full). The clip
// lemma suites never go below 1e5 samples.
std::size_t verify_samples(VerifyLevel level);

// Runs the invariant suites of the distribution, clipping, Tsallis,
// zeroth-order and environment modules. Failures are entries, not throws.
VerifyReport verify_all(const VerifyOptions& options = {});

}  // namespace htmab
