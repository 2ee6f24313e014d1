#include "expertrank/cohits.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "expertrank/errors.hpp"

namespace expertrank {

const char* hub_init_name(HubInit mode) {
    return mode == HubInit::nvsm ? "nvsm" : "uniform_docs";
}

HubInit hub_init_from_name(const std::string& name) {
    if (name == "nvsm") return HubInit::nvsm;
    if (name == "uniform_docs") return HubInit::uniform_docs;
    fail("E_FORMAT", "unknown hub init mode: " + name);
}

const char* authority_init_name(AuthorityInit mode) {
    return mode == AuthorityInit::nvsm ? "nvsm" : "uniform_experts";
}

AuthorityInit authority_init_from_name(const std::string& name) {
    if (name == "nvsm") return AuthorityInit::nvsm;
    if (name == "uniform_experts") return AuthorityInit::uniform_experts;
    fail("E_FORMAT", "unknown authority init mode: " + name);
}

void CoHitsParams::validate() const {
    if (!(lambda_x >= 0.0 && lambda_x <= 1.0))
        fail("E_PARAM", "lambda_x must be in [0, 1]");
    if (!(lambda_d >= 0.0 && lambda_d <= 1.0))
        fail("E_PARAM", "lambda_d must be in [0, 1]");
    if (iterations < 1) fail("E_PARAM", "iterations must be >= 1");
    if (threads < 1) fail("E_PARAM", "threads must be >= 1");
}

double l2_norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

std::vector<double> l2_normalize(const std::vector<double>& v) {
    double norm = l2_norm(v);
    if (norm <= 1e-12) return v;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
    return out;
}

IterationState seed(int topic, const WeightMatrix& etopm, const WeightMatrix& dtopm,
                    const Ecg& ecg, const CoHitsParams& params) {
    if (topic < 0 || topic >= etopm.cols() || topic >= dtopm.cols())
        fail("E_REF", "topic index " + std::to_string(topic) + " out of range");
    if (etopm.rows() != static_cast<int>(ecg.expert_node.size()) ||
        dtopm.rows() != static_cast<int>(ecg.doc_node.size()))
        fail("E_DIM", "matrix dimensions do not match the graph");

    IterationState state;
    state.a.assign(ecg.size(), 0.0);
    state.h.assign(ecg.size(), 0.0);

    if (params.authority_init == AuthorityInit::nvsm) {
        std::vector<double> column = etopm.column(topic);
        for (std::size_t x = 0; x < column.size(); ++x)
            state.a[ecg.expert_node[x]] = column[x];
        state.a = l2_normalize(state.a);
    } else {
        for (int node : ecg.expert_node) state.a[node] = 1.0;  // raw, not normalized
    }

    if (params.hub_init == HubInit::nvsm) {
        std::vector<double> column = dtopm.column(topic);
        for (std::size_t d = 0; d < column.size(); ++d)
            state.h[ecg.doc_node[d]] = column[d];
        state.h = l2_normalize(state.h);
    } else {
        for (int node : ecg.doc_node) state.h[node] = 1.0;  // raw, not normalized
    }
    return state;
}

std::vector<double> authority_update(const std::vector<double>& a_prev,
                                     const std::vector<double>& h_prev,
                                     const Ecg& ecg, double lambda_x) {
    if (static_cast<int>(a_prev.size()) != ecg.size()) fail("E_DIM", "vector length != |V|");
    // The division happens after the product, and c_d's padding makes it a
    // no-op wherever the numerator can be nonzero.
    std::vector<double> mt_h = ecg.mul_t(h_prev);
    std::vector<double> out(ecg.size());
    for (int i = 0; i < ecg.size(); ++i)
        out[i] = (1.0 - lambda_x) * a_prev[i] + lambda_x * (mt_h[i] / ecg.c_d[i]);
    return out;
}

std::vector<double> hub_update(const std::vector<double>& h_prev,
                               const std::vector<double>& a_fresh,
                               const Ecg& ecg, double lambda_d) {
    if (static_cast<int>(h_prev.size()) != ecg.size()) fail("E_DIM", "vector length != |V|");
    std::vector<double> m_a = ecg.mul(a_fresh);
    std::vector<double> out(ecg.size());
    for (int i = 0; i < ecg.size(); ++i)
        out[i] = (1.0 - lambda_d) * h_prev[i] + lambda_d * (m_a[i] / ecg.c_x[i]);
    return out;
}

IterationState step(const IterationState& state, const Ecg& ecg,
                    double lambda_x, double lambda_d) {
    IterationState next;
    next.iteration = state.iteration + 1;
    next.a = authority_update(state.a, state.h, ecg, lambda_x);
    next.h = hub_update(state.h, next.a, ecg, lambda_d);
    return next;
}

namespace {

bool is_zero(const std::vector<double>& v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

void check_finite(const std::vector<double>& v, int topic) {
    for (double x : v)
        if (!std::isfinite(x))
            fail("E_NUMERIC", "non-finite score while reinforcing topic " +
                                  std::to_string(topic));
}

} // namespace

WeightMatrix reinforce(const WeightMatrix& etopm, const WeightMatrix& dtopm,
                       const Ecg& ecg, const CoHitsParams& params,
                       ReinforceReport* report) {
    params.validate();
    if (etopm.cols() != dtopm.cols())
        fail("E_DIM", "expert and document topic matrices disagree on topic count");

    const int n_topics = etopm.cols();
    const int n_experts = etopm.rows();
    WeightMatrix retopm(MatrixRole::RETopM, n_experts, n_topics);

    std::vector<TopicDiagnostics> diagnostics(n_topics);
    // Column buffer, written independently per topic; assembly below is
    // order-independent, so any thread partition yields identical output.
    std::vector<std::vector<double>> columns(n_topics);

    auto run_topic = [&](int t) {
        TopicDiagnostics& diag = diagnostics[t];
        diag.topic = t;
        IterationState state = seed(t, etopm, dtopm, ecg, params);
        if (is_zero(state.a) && is_zero(state.h)) {
            diag.zero_seed = true;
            columns[t].assign(n_experts, 0.0);
            return;
        }
        for (int k = 0; k < params.iterations; ++k) {
            state = step(state, ecg, params.lambda_x, params.lambda_d);
            state.a = l2_normalize(state.a);
            state.h = l2_normalize(state.h);
            check_finite(state.a, t);
            check_finite(state.h, t);
        }
        diag.iterations_run = params.iterations;
        diag.a_norm = canonical_value(l2_norm(state.a));
        diag.h_norm = canonical_value(l2_norm(state.h));
        columns[t].resize(n_experts);
        for (int x = 0; x < n_experts; ++x) columns[t][x] = state.a[ecg.expert_node[x]];
    };

    const int workers = std::min(params.threads, std::max(1, n_topics));
    if (workers <= 1) {
        for (int t = 0; t < n_topics; ++t) run_topic(t);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int t = w; t < n_topics; t += workers) run_topic(t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& thread : pool) thread.join();
        for (const auto& error : errors)
            if (error) std::rethrow_exception(error);
    }

    int zero_seeds = 0;
    for (int t = 0; t < n_topics; ++t) {
        if (diagnostics[t].zero_seed) ++zero_seeds;
        for (int x = 0; x < n_experts; ++x)
            if (columns[t][x] != 0.0) retopm.set(x, t, columns[t][x]);
    }
    if (report) {
        report->topics = std::move(diagnostics);
        report->zero_seed_count = zero_seeds;
    }
    return retopm;
}

} // namespace expertrank
