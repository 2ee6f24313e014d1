#pragma once

#include <string>
#include <vector>

#include "expertrank/ecg.hpp"
#include "expertrank/matrices.hpp"

namespace expertrank {

// Seed choices for the per-topic iteration. `nvsm` seeds from the topic's
// weight column (the model's stated initialization); `uniform_docs` /
// `uniform_experts` place an unnormalized 1 at every on-role position.
enum class HubInit { nvsm, uniform_docs };
enum class AuthorityInit { nvsm, uniform_experts };

const char* hub_init_name(HubInit mode);
HubInit hub_init_from_name(const std::string& name);
const char* authority_init_name(AuthorityInit mode);
AuthorityInit authority_init_from_name(const std::string& name);

struct CoHitsParams {
    double lambda_x = 1.0;
    double lambda_d = 0.7;
    int iterations = 5;
    HubInit hub_init = HubInit::nvsm;
    AuthorityInit authority_init = AuthorityInit::nvsm;
    int threads = 1;

    void validate() const;  // lambda bounds, iterations >= 1, threads >= 1
};

// Full-graph-sized score vectors: a is nonzero only at expert positions,
// h only at document positions.
struct IterationState {
    std::vector<double> a;
    std::vector<double> h;
    int iteration = 0;
};

struct TopicDiagnostics {
    int topic = -1;
    bool zero_seed = false;
    int iterations_run = 0;
    double a_norm = 0.0;
    double h_norm = 0.0;
};

struct ReinforceReport {
    std::vector<TopicDiagnostics> topics;
    int zero_seed_count = 0;
};

// v / ||v||_2, or v unchanged when ||v||_2 <= 1e-12.
std::vector<double> l2_normalize(const std::vector<double>& v);

double l2_norm(const std::vector<double>& v);

// Initial state for one topic: a0 embeds the expert weight column at expert
// positions (L2-normalized), h0 embeds the document weight column at document
// positions (L2-normalized). The uniform modes instead write a raw 1 at every
// on-role position and skip normalization, so the first update sees the 1s.
IterationState seed(int topic, const WeightMatrix& etopm, const WeightMatrix& dtopm,
                    const Ecg& ecg, const CoHitsParams& params);

// The two halves of one damped update, unnormalized. The division is
// element-wise and applied after the matrix-vector product:
//   authority: a' = (1 - lambda_x) * a + lambda_x * ((M^T h) / c_d)
//   hub:       h' = (1 - lambda_d) * h + lambda_d * ((M a') / c_x)
std::vector<double> authority_update(const std::vector<double>& a_prev,
                                     const std::vector<double>& h_prev,
                                     const Ecg& ecg, double lambda_x);
std::vector<double> hub_update(const std::vector<double>& h_prev,
                               const std::vector<double>& a_fresh,
                               const Ecg& ecg, double lambda_d);

// One full update pair: the authority half followed by the hub half, the
// freshly computed a' feeding the h update. Unnormalized (the caller
// normalizes at the end of the iteration).
IterationState step(const IterationState& state, const Ecg& ecg,
                    double lambda_x, double lambda_d);

// Per-topic reinforcement: seed, then k rounds of (step; normalize a;
// normalize h); the final a restricted to expert positions becomes the
// topic's column. Topics whose entire seed is zero are skipped, yield a zero
// column, and are counted in the report. Output is identical for any thread
// count (topics are independent; columns are written in place).
WeightMatrix reinforce(const WeightMatrix& etopm, const WeightMatrix& dtopm,
                       const Ecg& ecg, const CoHitsParams& params,
                       ReinforceReport* report = nullptr);

} // namespace expertrank
