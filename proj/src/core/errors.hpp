#ifndef ZELF_CORE_ERRORS_HPP
#define ZELF_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zelf {

// Point outside the cross-section rectangle (or outside its interior where
// derivatives are contracted).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Solver breakdown: step-size underflow with no progress, Newton failure in
// the stiff fallback, and similar. Carries the failing state in the message.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zelf

#endif
