#pragma once

#include "incprune/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace incprune {

/// A parse failure with the offending line (0 when the problem is
/// file-level, e.g. a missing section).
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& message)
        : std::runtime_error(message), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

struct Diagnostic {
    std::string message;
};

/// Parsed model plus the side information the solver itself ignores.
struct ParseResult {
    PomdpModel model;
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> obs_names;
    std::vector<double> start;  // retained, unused by the solver
    std::vector<std::string> warnings;
};

/// Parses the standard .POMDP text format: the preamble keywords, the
/// three T:/O: arities plus uniform/identity forms, R: with up to four
/// ids, '*' wildcards anywhere, '#' comments and free whitespace. Richer
/// reward signatures are collapsed to expected immediate reward R^a(s)
/// using the model probabilities; `values: cost` negates. Within equal
/// specificity later statements overwrite earlier ones, and more specific
/// statements always beat wildcards regardless of file order.
ParseResult parse_pomdp(const std::string& text);

/// As parse_pomdp, returning just the model.
PomdpModel parse(const std::string& text);

/// Semantic checks on an assembled model: row stochasticity, discount
/// range, dimension consistency. Empty result means valid.
std::vector<Diagnostic> validate(const PomdpModel& model);

/// The fully expanded per-entry form; parse(serialize(m)) reproduces m
/// exactly.
std::string serialize(const PomdpModel& model);

}  // namespace incprune
