#pragma once

#include "metric.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finsler {

// Parameter slots for the zoo factories; unset fields take the entry's
// recorded defaults.
struct ZooParams {
    std::optional<int> n;
    std::optional<std::string> sigma;                       // antonelli_shimada
    std::optional<std::vector<std::vector<std::string>>> a; // hermitian-family
    std::optional<std::vector<std::string>> b;              // randers / kropina
    std::optional<std::vector<cplx>> base_point;
};

// ids: flat, hermitian_kahler_potential, hermitian_nonkahler,
// antonelli_shimada, randers, kropina, local_minkowski.
std::vector<std::string> zoo_ids();

// Builds and validates the named metric; throws UnknownId / ValidationError.
MetricSpec zoo_make(const std::string& id, const ZooParams& params = {});

// Expected lattice verdicts at the entry's default parameters (true = holds);
// reproduced by the classifier in the acceptance suite.
const std::map<std::string, bool>& zoo_expected(const std::string& id);

} // namespace finsler
