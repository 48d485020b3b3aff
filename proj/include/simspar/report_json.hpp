#pragma once

#include "simspar/densify.hpp"
#include "simspar/eigen_est.hpp"
#include "simspar/embed.hpp"
#include "simspar/partition.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>

namespace simspar {

// {lambda_max, lambda_min, sigma2, iterations, converged}
nlohmann::json to_json(const SimilarityReport& r);
nlohmann::json to_json(const IterationRecord& r);
nlohmann::json to_json(const StepStats& s);
nlohmann::json to_json(const PhaseTimings& t);

/// Full sparsify report: similarity, density, trace, per-phase timings.
nlohmann::json sparsify_report(const Graph& g, const SparsifyResult& res, const SparsifyOptions& opts);

/// CSV "rank,edge,p,q,heat,normalized" with a header row.
void write_heat_csv(std::ostream& out, const Graph& g, std::span<const EdgeHeat> heats,
                    std::span<const VertexId> original_id = {});

}  // namespace simspar
