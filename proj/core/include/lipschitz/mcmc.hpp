#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lipschitz/coupling.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/oracle.hpp"
#include "lipschitz/random.hpp"
#include "lipschitz/stats.hpp"

namespace lipschitz {

enum class SiteOrder { fixed, shuffled };

struct SamplerConfig {
  long long sweeps = 10000;       // recorded sweeps after burn-in
  long long burnin = 1000;
  long long cluster_period = -1;  // cluster move after every k-th sweep; 0 = never, -1 = auto
  long long thin = 1;
  std::uint64_t seed = 1;
  SiteOrder order = SiteOrder::fixed;
  long long sample_cap = 100'000'000;  // recorded values per observable
  int batches = 32;                    // batch-means batches per chain

  void validate() const;
};

// 1 when some c_e > 2, 4 otherwise.
long long auto_cluster_period(const Model& model);

// Triplet (h, B, ω) under ℙ^ξ with its own random stream. Model and ξ must
// outlive the state.
class ChainState {
 public:
  // Starts from the minimal extension of ξ unless an initial field is given.
  ChainState(const Model& model, const BoundaryCondition& xi, Rng rng, const HeightField* init = nullptr);
  // The model and ξ are held by reference.
  ChainState(Model&&, const BoundaryCondition&, Rng, const HeightField* = nullptr) = delete;
  ChainState(const Model&, BoundaryCondition&&, Rng, const HeightField* = nullptr) = delete;

  const Model& model() const { return *model_; }
  const BoundaryCondition& xi() const { return *xi_; }
  const HeightField& h() const { return h_; }
  const EdgeConfig& b() const { return b_; }
  const EdgeConfig& omega() const { return omega_; }
  long long steps() const { return steps_; }
  const std::vector<VertexId>& free_sites() const { return free_; }
  Rng& rng() { return rng_; }

  // Exact conditional resampling of h(x); ω follows on the incident edges.
  void heat_bath_site(VertexId x);
  // Heat-bath pass over the free sites, then B refreshed and ω rebuilt.
  void sweep(SiteOrder order = SiteOrder::fixed);
  // B refreshed, ω rebuilt, cluster signs resampled; B is then redrawn given (h, ω).
  void cluster_sweep();
  void refresh_b();

  // Throws CorruptState on an invalid triplet.
  void validate() const;

 private:
  struct Neighbor {
    VertexId y;
    EdgeId e;
    double c;
  };
  const Model* model_;
  const BoundaryCondition* xi_;
  Rng rng_;
  HeightField h_;
  EdgeConfig b_;
  EdgeConfig omega_;
  long long steps_ = 0;
  std::vector<VertexId> free_;
  std::vector<std::vector<Neighbor>> nbrs_;
  std::vector<double> p_;
};

struct Observable {
  std::string name;
  std::function<double(const ChainState&)> value;
};

struct ObservableStats {
  std::string name;
  Estimate estimate;
  std::vector<double> series;  // filled on request, chain after chain
};

struct RunResult {
  std::vector<ObservableStats> observables;
  long long sweeps = 0;  // total sweeps over all chains, burn-in included
  const ObservableStats& operator[](const std::string& name) const;
};

// One chain on stream 0 of config.seed, or `chains` independent chains on
// streams 0..chains-1 spread over `threads` workers. Output does not depend
// on the thread count.
RunResult run(const Model& model, const BoundaryCondition& xi, const SamplerConfig& config,
              const std::vector<Observable>& observables, bool keep_series = false, int chains = 1, int threads = 1);

// Torus of the given kind with only the root constrained to {-1, 1}.
RunResult torus_run(const LatticePatch& torus, const EdgeWeight& c, VertexId root, const SamplerConfig& config,
                    const std::vector<Observable>& observables, int chains = 1, int threads = 1);
RunResult torus_run(LatticeKind kind, int n, const EdgeWeight& c, VertexId root, const SamplerConfig& config,
                    const std::vector<Observable>& observables, int chains = 1, int threads = 1);

// Exact single-site conditional law (value, probability) of h(x) given the rest.
template <class Real>
std::vector<std::pair<int, Real>> heat_bath_conditional(const Model& model, const BoundaryCondition& xi,
                                                        const HeightField& h, VertexId x);

// Exact kernels acting on an enumerated height distribution.
template <class Real>
HeightDistribution<Real> apply_site_kernel(const HeightDistribution<Real>& d, const Model& model,
                                           const BoundaryCondition& xi, VertexId x);
template <class Real>
HeightDistribution<Real> apply_sweep_kernel(const HeightDistribution<Real>& d, const Model& model,
                                            const BoundaryCondition& xi, const std::vector<VertexId>& order);
// Refresh B, build ω, resample cluster signs. Throws CapExceeded when the
// number of (h, B) pairs to visit exceeds cap.
template <class Real>
HeightDistribution<Real> apply_cluster_kernel(const HeightDistribution<Real>& d, const Model& model,
                                              const BoundaryCondition& xi, long long cap = 20'000'000);

// Vertices not pinned to a single value by ξ.
std::vector<VertexId> free_sites(const Model& model, const BoundaryCondition& xi);

// Single-site +2 moves from the minimal to the maximal extension, each move
// legal at the time it is made (an explicit irreducibility path).
std::vector<VertexId> climb_path(const FiniteGraph& g, const BoundaryCondition& xi);

}  // namespace lipschitz
