#pragma once

#include <stdexcept>
#include <string>

namespace pstream {

/// Error categories raised by the library. The CLI maps these onto exit
/// codes (validation -> 2, budget/refusal -> 3).
enum class Errc {
  prob_sum_exceeds_one,
  non_positive_prob,
  non_positive_value,
  duplicate_value,
  all_bot_item,
  value_out_of_domain,
  empty_summary,
  undefined_average,
  domain_unknown,
  empty_induced_stream,
  enumeration_too_large,
  infeasible_spec,
  parse_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::prob_sum_exceeds_one: return "ProbSumExceedsOne";
    case Errc::non_positive_prob: return "NonPositiveProb";
    case Errc::non_positive_value: return "NonPositiveValue";
    case Errc::duplicate_value: return "DuplicateValue";
    case Errc::all_bot_item: return "AllBotItem";
    case Errc::value_out_of_domain: return "ValueOutOfDomain";
    case Errc::empty_summary: return "EmptySummary";
    case Errc::undefined_average: return "UndefinedAverage";
    case Errc::domain_unknown: return "DomainUnknown";
    case Errc::empty_induced_stream: return "EmptyInducedStream";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::infeasible_spec: return "InfeasibleSpec";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

class StreamError : public std::runtime_error {
 public:
  StreamError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  Errc code() const { return code_; }

  /// The message without the error-name prefix (for rewrapping).
  const std::string& detail() const { return detail_; }

  /// True for errors that mean "computation refused under these parameters",
  /// as opposed to "input invalid".
  bool is_refusal() const {
    return code_ == Errc::enumeration_too_large ||
           code_ == Errc::empty_induced_stream;
  }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace pstream
