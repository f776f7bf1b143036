#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gasket/cloud.hpp"
#include "gasket/operators.hpp"

namespace gasket {

// Eigenvalues of the alpha-stable generator on G^(M), killed on the obstacle
// set and outside the interior of the blown-up triangle, with the provenance
// needed to normalize and reproduce them.
struct KilledSpectrum {
    std::vector<double> eigenvalues;  // ascending, >= 0; empty iff no free interior vertex
    int blowup = 0;
    int depth = 0;
    int pad = 0;
    double alpha = 1.0;
    double radius = 0.0;  // obstacle radius a
    std::uint64_t cloud_seed = 0;

    double normalization() const;  // 3^{-M}
};

// Normalized eigenvalue counting measure of one obstacle configuration.
struct EmpiricalIDS {
    KilledSpectrum spectrum;
};

// l([0,lambda]) = 3^{-M} #{n : lambda_n <= lambda}.
double ids_cdf(const EmpiricalIDS& ids, double lambda);

// 3^{-M} sum_n exp(-lambda_n t); the trace of the killed heat semigroup.
double laplace_transform(const EmpiricalIDS& ids, double t);

// Cloud-averaged Laplace transform L_M(t) on a time grid, with MC stderr.
struct LaplaceCurve {
    std::vector<double> t;
    std::vector<double> value;
    std::vector<double> stderr_;
    double nu = 0.0;
    double radius = 0.0;
    double alpha = 1.0;
    int blowup = 0;
    int depth = 0;
    int pad = 0;
    long n_clouds = 0;
    std::uint64_t seed = 0;
};

// Shared heavy state for killed-spectrum computations at fixed (M, m, pad,
// alpha): the padded ambient graph G^(M+pad)@(m+pad) (same lattice spacing as
// the region G^(M)@m), its Laplacian eigendecomposition, and the fractional
// operator pre-restricted to the interior vertices of the region. Per-cloud
// spectra are then cheap principal-submatrix eigensolves.
class SpectralContext {
  public:
    SpectralContext(int blowup, int depth, int pad, double alpha);

    const LevelGraph& region() const;
    int pad() const;
    double alpha() const;
    // Region vertex indices strictly inside the outer triangle of G^(M).
    const std::vector<int>& interior() const;
    // H^{alpha/2} (ambient fractional generator) restricted to interior().
    const SymmetricOperator& stable_interior() const;
    // Ambient Brownian generator restricted to interior() (for the
    // power-of-restriction comparison).
    const SymmetricOperator& brownian_interior() const;

    // Positions (into interior()) of interior vertices farther than `radius`
    // from every cloud center.
    std::vector<int> free_interior(const Cloud& cloud, double radius) const;

    // Spectrum of the restriction-after-power operator on the free interior
    // set. radius < 0 means the cloud's own radius.
    KilledSpectrum killed_spectrum(const Cloud& cloud, double radius = -1.0) const;
    // Same free set, Brownian generator (power-of-restriction base).
    std::vector<double> killed_brownian_spectrum(const Cloud& cloud, double radius = -1.0) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Convenience wrapper building a throwaway context for one configuration.
KilledSpectrum killed_spectrum(const LevelGraph& g, const Cloud& cloud, double a, double alpha,
                               int pad);

// Smallest sampling depth m_s with cell side 2^{M - m_s} < a/4.
int min_sampling_depth(int blowup, double a);

// Independent clouds (seeds derived from `seed` by cloud index) and their
// killed spectra. nu = 0 yields a single obstacle-free spectrum.
std::vector<KilledSpectrum> ensemble_spectra(const SpectralContext& ctx, double nu, double a,
                                             long n_clouds, std::uint64_t seed,
                                             int sampling_depth);

// Deterministic reduction of per-cloud Laplace transforms (mean and stderr in
// cloud-index order).
LaplaceCurve curve_from_spectra(const std::vector<KilledSpectrum>& spectra,
                                const std::vector<double>& t_grid, double nu,
                                std::uint64_t seed);

// Cloud-averaged IDS value at lambda: mean over clouds of ids_cdf.
double ensemble_ids_cdf(const std::vector<KilledSpectrum>& spectra, double lambda);

// One-call pipeline: context + ensemble + reduction.
LaplaceCurve averaged_laplace(int blowup, int depth, int pad, double nu, double a, double alpha,
                              const std::vector<double>& t_grid, long n_clouds,
                              std::uint64_t seed);

// Candidate set for the variational upper-bound constant: a nonempty union of
// depth-k cells of G^(0), given by indices into enumerate_cells(0, k).
struct CandidateSet {
    int cell_depth = 0;
    std::vector<int> cells;
};

struct VariationalResult {
    double value = 0.0;    // lambda0(U) + 2^{-d_alpha} mu(U)
    double lambda0 = 0.0;  // killed stable principal eigenvalue on U
    double mu = 0.0;       // mu(U)
    CandidateSet best;
};

// Minimizes lambda0(U) + 2^{-d_alpha} mu(U) over the candidate family, on the
// depth-m graph of G^(0) with no exterior killing (full-graph generator,
// Dirichlet only outside U).
VariationalResult variational_functional(const std::vector<CandidateSet>& candidates, double alpha,
                                         int depth);

// Greedy local search (single-cell add/remove moves) plus random restarts over
// the depth-k cell subsets; returns the best local minimum found.
VariationalResult minimize_variational(double alpha, int depth, int cell_depth, int n_restarts,
                                       std::uint64_t seed);

// Smallest R > 3 with c3/(R^s - 1) <= (1/2) (e^K (1 + c4 (1 + K/delta)))^{-1}.
double min_R(double c3, double c4, double K, double delta, double s);

// Enlargement-of-obstacles diagnostic: principal eigenvalue with the true
// (a*eps)-obstacles versus with (b*eps)-balls around good centers only.
struct EnlargementReport {
    double lambda_theta = 0.0;  // +inf encoded as infinity() when no free vertex
    double lambda_b = 0.0;
    double cutoff = 0.0;  // K
    double slack = 0.0;   // delta
    double b = 0.0;
    double eps = 0.0;
    long n_centers = 0;
    long n_good = 0;
    bool holds = false;  // lambda_b ^ K <= lambda_theta ^ K + delta
};

EnlargementReport check_enlargement(const SpectralContext& ctx, const Cloud& cloud,
                                    const ClassifyParams& params, double cutoff, double slack);

}  // namespace gasket
