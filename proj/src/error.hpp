#ifndef IDEALIS_ERROR_HPP
#define IDEALIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace idealis {

enum class errc {
  invalid_argument = 1,
  unsupported_ring = 2,
  search_exhausted = 3,
  internal = 4,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }
[[noreturn]] inline void fail_invalid(const std::string& msg) { fail(errc::invalid_argument, msg); }
[[noreturn]] inline void fail_unsupported(const std::string& msg) { fail(errc::unsupported_ring, msg); }
[[noreturn]] inline void fail_exhausted(const std::string& msg) { fail(errc::search_exhausted, msg); }

} // namespace idealis

#endif
