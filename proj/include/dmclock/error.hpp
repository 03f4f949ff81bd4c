#pragma once

#include <stdexcept>
#include <string>

namespace dmclock
{

//! Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Raised when an iterative numerical method fails to converge.
class NumericError : public std::runtime_error
{
  public:
    NumericError(std::string const& what, double achieved_tolerance)
        : std::runtime_error(what), achieved_tolerance_(achieved_tolerance)
    {
    }

    double achieved_tolerance() const noexcept { return achieved_tolerance_; }

  private:
    double achieved_tolerance_;
};

namespace detail
{
inline void require(bool cond, std::string const& msg)
{
    if (!cond)
    {
        throw InvalidInput(msg);
    }
}
}  // namespace detail

}  // namespace dmclock
