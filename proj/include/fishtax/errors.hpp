#ifndef FISHTAX_ERRORS_HPP
#define FISHTAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fishtax {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// bio_model
class NoInteriorGoldenRule : public Error { public: using Error::Error; };
class AssumptionOneViolated : public Error { public: using Error::Error; };
class RevenueNegative : public Error { public: using Error::Error; };
class RevenueNonzeroAtOrigin : public Error { public: using Error::Error; };
class DiscountTooLarge : public Error { public: using Error::Error; };
class InvalidParameter : public Error { public: using Error::Error; };

// convex_kit
class EmptyAgentList : public Error { public: using Error::Error; };
class PointOutsideDomain : public Error { public: using Error::Error; };

// hjb_solver
class BranchRootNotBracketed : public Error { public: using Error::Error; };
class NonConcaveValueDetected : public Error { public: using Error::Error; };
class NotLinearIdenticalCommunity : public Error { public: using Error::Error; };

// strategies
class EpsilonTooLarge : public Error { public: using Error::Error; };

// tax_engine
class HorizonTooShort : public Error { public: using Error::Error; };

// cli_io
class ParseError : public Error {
public:
    ParseError(const std::string& field_path, const std::string& msg)
        : Error("config field '" + field_path + "': " + msg), path_(field_path) {}
    const std::string& path() const { return path_; }
private:
    std::string path_;
};

class ValidationError : public Error { public: using Error::Error; };

} // namespace fishtax

#endif
