// model_io.hpp — the line-oriented model file format.
//
// A model file is plain text, one record per line, '#' starts a comment.
// Records (in canonical export order; the parser accepts any order):
//
//   anyonmodel 1
//   name <string>
//   charges <label> <label> ...          # ordered
//   vacuum <label>
//   dual <a> <dual-of-a>                 # one line per charge
//   fusion <a> <b> <c> <N>               # nonzero multiplicities, a <= b
//   dim <charge> <value>                 # optional; cross-checked, not trusted
//   fsymbol <a> <b> <c> <d> <e> <alpha> <beta> <f> <mu> <nu> <re> <im>
//   twist <charge> <re> <im>             # optional
//   smatrix <row-charge> <re> <im> ...   # optional, 2 x charge-count values
//
// Numbers are written with 17 significant digits, which round-trips IEEE
// doubles exactly; export -> import -> export is byte-identical.

#pragma once

#include "anyon/models.hpp"

#include <string>
#include <string_view>

namespace anyon {

// Malformed file shape (bad tokens, unknown records, missing sections);
// carries the 1-based line number when one applies.
class parse_error : public std::runtime_error {
  public:
    parse_error(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

// Canonical text form of a model (deterministic field order and number
// formatting).
std::string serialize_model(const AnyonModel& model);

// Parses and fully validates; throws parse_error for malformed input and
// validation_error naming the first violated invariant otherwise. With
// run_validation = false the final whole-model check (unitarity,
// pentagon, S-matrix properties) is left to the caller; structural
// invariants (fusion rules, dimension consistency, F admissibility) are
// still enforced.
AnyonModel parse_model(std::string_view text, bool run_validation = true);

AnyonModel load_model_file(const std::string& path);
void write_model_file(const AnyonModel& model, const std::string& path);

// 17-significant-digit formatting used across all text output.
std::string format_double(double value);

}  // namespace anyon
