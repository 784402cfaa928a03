#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ousv {

enum class PricingMethod {
    McTerminal,
    McMixing,
    ExactEmpirical,
    ExactInversion,
    ExactFullform,
};

std::string_view to_string(PricingMethod m);
PricingMethod pricing_method_from_string(std::string_view name);

struct PriceResult {
    double price = 0.0;        // time-0 value
    double std_error = 0.0;    // sampling standard error
    double quad_error = 0.0;   // quadrature error estimate (deterministic methods)
    PricingMethod method = PricingMethod::McMixing;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::string config_digest;  // reproducibility token, filled by callers that own a config
    bool experimental = false;  // rho != 0 simulation; not a price under the minimal measure
};

}  // namespace ousv
