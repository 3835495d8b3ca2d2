#pragma once

// The 256 figure/mood combinations of two-premise categorical syllogisms.
// Terms: S (minor), P (major), M (middle); the conclusion is always S-P.
//
//   figure 1: M-P, S-M    figure 2: P-M, S-M
//   figure 3: M-P, M-S    figure 4: P-M, M-S

#include <array>
#include <string>
#include <vector>

#include "sylo/aristotle/categorical.hpp"
#include "sylo/prover/verdict.hpp"

namespace sylo::aristotle {

struct Mood {
  int figure;                     // 1..4
  std::array<FormKind, 3> forms;  // major premise, minor premise, conclusion

  /// e.g. "AAA-1".
  std::string name() const {
    std::string out;
    for (auto f : forms) out += form_name(f);
    return out + "-" + std::to_string(figure);
  }
};

inline std::vector<Mood> all_moods() {
  static constexpr std::array<FormKind, 4> kForms = {FormKind::A, FormKind::E, FormKind::I, FormKind::O};
  std::vector<Mood> out;
  for (int fig = 1; fig <= 4; ++fig)
    for (auto a : kForms)
      for (auto b : kForms)
        for (auto c : kForms) out.push_back(Mood{fig, {a, b, c}});
  return out;
}

inline prover::ProverProblem mood_problem(const Mood& m) {
  const std::string S = "S", P = "P", M = "M";
  bool major_m_first = m.figure == 1 || m.figure == 3;
  bool minor_s_first = m.figure == 1 || m.figure == 2;
  auto major = major_m_first ? categorical_sentence(m.forms[0], M, P) : categorical_sentence(m.forms[0], P, M);
  auto minor = minor_s_first ? categorical_sentence(m.forms[1], S, M) : categorical_sentence(m.forms[1], M, S);
  return prover::ProverProblem{{major, minor}, categorical_sentence(m.forms[2], S, P)};
}

}  // namespace sylo::aristotle
