#ifndef HACE_RUNNER_HPP_
#define HACE_RUNNER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hace/catspec.hpp"
#include "hace/ends.hpp"
#include "hace/error.hpp"

namespace hace {

struct CheckRecord {
  std::string              name;
  bool                     ok = true;
  std::vector<std::size_t> counts;
  std::vector<std::string> failures;
};

// A carrier with canonical labels; legs[j] is the table of leg j.
struct CarrierRecord {
  std::string                           name;
  std::vector<std::string>              elements;
  std::vector<std::vector<std::size_t>> legs;
};

struct JobRecord {
  std::size_t                                      index = 0;
  std::string                                      kind;
  std::vector<std::string>                         args;
  std::vector<CarrierRecord>                       carriers;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<CheckRecord>                         checks;
  std::optional<ErrorKind>                         error;
  std::string                                      error_message;
};

struct Report {
  std::uint64_t            seed = 0;
  std::vector<std::string> methods;
  std::vector<JobRecord>   jobs;
};

struct RunFlags {
  std::uint64_t          seed = 0;
  std::vector<EndMethod> methods = all_end_methods();
  bool                   check_assoc = true;
};

// Resolves the CatSpec (throwing on parse-level or validation errors) and runs
// the jobs in declaration order.  Errors raised inside a job are recorded
// on that job and the run continues.
Report run(CatSpec const& spec, RunFlags const& flags = {});
Report run(Model const& model, CatSpec const& spec, RunFlags const& flags);

std::string render_text(Report const& r);
// Canonical key order (sorted), two-space indent.
std::string render_json(Report const& r);

// 0 ok, 1 law failure, 2 size cap, 3 parse or resolution, 4 validation,
// 5 any other error.
int exit_code_for(ErrorKind k);
int exit_code(Report const& r);

}  // namespace hace

#endif  // HACE_RUNNER_HPP_
