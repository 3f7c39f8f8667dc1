#ifndef LTSKIT_ERROR_HPP_
#define LTSKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lts {

// Bad input data or files: maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant: maps to exit code 3 in the CLI.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void check_data(bool cond, const std::string& msg) {
  if (!cond) throw DataError(msg);
}

inline void check_internal(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace lts

#endif  // LTSKIT_ERROR_HPP_
