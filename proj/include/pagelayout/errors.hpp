#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pagelayout {

// Malformed or invariant-violating input data (files, layouts, maps).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Collects non-fatal warnings raised while processing a page. Functions take
// an optional pointer; passing nullptr discards the messages.
struct Diagnostics {
  std::vector<std::string> messages;

  void warn(std::string message) { messages.push_back(std::move(message)); }
  bool empty() const { return messages.empty(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag) diag->warn(std::move(message));
}

} // namespace pagelayout
