#include "apar/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace apar {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kUpdateEps = kMultiplicativeUpdateEps;

double checked(double value, const char* term, long iteration) {
    if (!std::isfinite(value)) throw NumericError(term, iteration, "non-finite value");
    return value;
}

// Row i mixes a_i of the user's own factors with b_i of each neighbor's:
// a_i = gamma_i and b_i = (1-gamma_i) (averaged or raw), except that users
// without neighbors fall back to their own factors at full weight.
SpMat mixing_matrix(const Eigen::VectorXd& gamma, const std::vector<std::vector<int>>& neighbors,
                    NeighborMode mode) {
    const int m = static_cast<int>(gamma.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(m * 2);
    for (int i = 0; i < m; ++i) {
        if (neighbors[i].empty()) {
            triplets.emplace_back(i, i, 1.0);
            continue;
        }
        triplets.emplace_back(i, i, gamma[i]);
        double share = 1.0 - gamma[i];
        if (mode == NeighborMode::Average) share /= static_cast<double>(neighbors[i].size());
        if (share == 0.0) continue;
        for (int k : neighbors[i]) triplets.emplace_back(i, k, share);
    }
    SpMat g(m, m);
    g.setFromTriplets(triplets.begin(), triplets.end());
    return g;
}

// Predicted scores restricted to the observed pattern of W.
SpMat masked_scores(const SpMat& w, const Eigen::MatrixXd& s, const Eigen::MatrixXd& q) {
    SpMat out = w;
    for (int i = 0; i < out.outerSize(); ++i)
        for (SpMat::InnerIterator it(out, i); it; ++it)
            it.valueRef() = s.row(i).dot(q.row(it.col()));
    return out;
}

struct TrainContext {
    const SpMat& w;
    SpMat g;
    const PersonalityGraph& graph;
    Hyperparams hp;

    double objective(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q, long iteration) const {
        Eigen::MatrixXd s = g * p;
        double fit = 0.0;
        for (int i = 0; i < w.outerSize(); ++i) {
            for (SpMat::InnerIterator it(w, i); it; ++it) {
                double e = it.value() - s.row(i).dot(q.row(it.col()));
                fit += e * e;
            }
        }
        fit = checked(0.5 * fit, "fit", iteration);

        double personality = 0.0;
        if (hp.lambda != 0.0)
            personality = checked(hp.lambda * p.cwiseProduct(graph.apply_laplacian(p)).sum(),
                                  "personality", iteration);

        double frobenius = checked(hp.alpha1 * p.squaredNorm() + hp.alpha2 * q.squaredNorm(),
                                   "frobenius", iteration);
        return checked(fit + personality + frobenius, "objective", iteration);
    }

    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> grad(const Eigen::MatrixXd& p,
                                                     const Eigen::MatrixXd& q) const {
        Eigen::MatrixXd s = g * p;
        SpMat residual = masked_scores(w, s, q);
        residual -= w;  // same pattern by construction

        Eigen::MatrixXd dp = g.transpose() * (residual * q);
        dp += 2.0 * hp.alpha1 * p;
        if (hp.lambda != 0.0) dp += 2.0 * hp.lambda * graph.apply_laplacian(p);

        Eigen::MatrixXd dq = residual.transpose() * s;
        dq += 2.0 * hp.alpha2 * q;
        return {std::move(dp), std::move(dq)};
    }
};

void check_dimensions(const FactorModel& model, const InteractionMatrix& interactions,
                      const PersonalityGraph& graph) {
    if (model.P.rows() != interactions.W.rows() || model.Q.rows() != interactions.W.cols())
        throw std::invalid_argument("factor dimensions do not match the interaction matrix");
    if (model.P.cols() != model.Q.cols())
        throw std::invalid_argument("P and Q disagree on the latent dimension");
    if (graph.size() != model.users())
        throw std::invalid_argument("personality graph size does not match user count");
    if (model.gamma.size() != model.users() ||
        static_cast<int>(model.neighbors.size()) != model.users())
        throw std::invalid_argument("model is missing gamma or neighbor sets");
}

}  // namespace

void Hyperparams::validate() const {
    if (d < 1) throw std::invalid_argument("latent dimension must be >= 1");
    if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
}

FactorModel init_model(int users, int items, const Hyperparams& hp) {
    if (users < 1 || items < 1) throw std::invalid_argument("need at least one user and item");
    hp.validate();

    FactorModel model;
    model.hp = hp;
    model.P.resize(users, hp.d);
    model.Q.resize(items, hp.d);

    // uniforms drawn straight from the engine so output is identical across
    // standard libraries; 1 - u maps [0,1) onto (0, 0.01]
    std::mt19937_64 rng(hp.seed);
    auto draw = [&rng] {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return 0.01 * (1.0 - u);
    };
    for (int i = 0; i < model.P.rows(); ++i)
        for (int k = 0; k < model.P.cols(); ++k) model.P(i, k) = draw();
    for (int j = 0; j < model.Q.rows(); ++j)
        for (int k = 0; k < model.Q.cols(); ++k) model.Q(j, k) = draw();

    model.gamma = Eigen::VectorXd::Ones(users);
    model.neighbors.assign(users, {});
    return model;
}

double predict(const FactorModel& model, int user, int item) {
    if (user < 0 || user >= model.users()) throw std::invalid_argument("user index out of range");
    if (item < 0 || item >= model.items()) throw std::invalid_argument("item index out of range");

    const double own = model.P.row(user).dot(model.Q.row(item));
    const auto& phi = model.neighbors[user];
    if (phi.empty()) return own;

    double shared = 0.0;
    for (int k : phi) shared += model.P.row(k).dot(model.Q.row(item));
    if (model.options.neighbor_mode == NeighborMode::Average)
        shared /= static_cast<double>(phi.size());

    const double g = model.gamma[user];
    return g * own + (1.0 - g) * shared;
}

double objective(const FactorModel& model, const InteractionMatrix& interactions,
                 const PersonalityGraph& graph, const Hyperparams& hp) {
    check_dimensions(model, interactions, graph);
    TrainContext ctx{interactions.W,
                     mixing_matrix(model.gamma, model.neighbors, model.options.neighbor_mode),
                     graph, hp};
    return ctx.objective(model.P, model.Q, -1);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradients(const FactorModel& model,
                                                      const InteractionMatrix& interactions,
                                                      const PersonalityGraph& graph,
                                                      const Hyperparams& hp) {
    check_dimensions(model, interactions, graph);
    TrainContext ctx{interactions.W,
                     mixing_matrix(model.gamma, model.neighbors, model.options.neighbor_mode),
                     graph, hp};
    return ctx.grad(model.P, model.Q);
}

namespace {

void multiplicative_sweep(TrainContext& ctx, Eigen::MatrixXd& p, Eigen::MatrixXd& q) {
    const double l2 = 2.0 * ctx.hp.lambda;

    Eigen::MatrixXd s = ctx.g * p;
    SpMat scores = masked_scores(ctx.w, s, q);

    Eigen::MatrixXd p_num = ctx.g.transpose() * (ctx.w * q);
    Eigen::MatrixXd p_den = ctx.g.transpose() * (scores * q) + 2.0 * ctx.hp.alpha1 * p;
    if (l2 != 0.0) {
        p_num += l2 * (ctx.graph.L() * p);
        p_den += l2 * (ctx.graph.degrees().asDiagonal() * p);
    }
    p.array() *= ((p_num.array() + kUpdateEps) / (p_den.array() + kUpdateEps)).sqrt();

    s = ctx.g * p;
    scores = masked_scores(ctx.w, s, q);
    Eigen::MatrixXd q_num = ctx.w.transpose() * s;
    Eigen::MatrixXd q_den = scores.transpose() * s + 2.0 * ctx.hp.alpha2 * q;
    q.array() *= ((q_num.array() + kUpdateEps) / (q_den.array() + kUpdateEps)).sqrt();
}

// One projected-gradient step with backtracking. Returns the accepted
// objective, or the previous one if no decrease was found.
double projected_step(TrainContext& ctx, Eigen::MatrixXd& p, Eigen::MatrixXd& q, double current,
                      double& step, long iteration, bool& moved) {
    auto [dp, dq] = ctx.grad(p, q);
    moved = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::MatrixXd p_next = (p - step * dp).cwiseMax(0.0);
        Eigen::MatrixXd q_next = (q - step * dq).cwiseMax(0.0);
        double value = ctx.objective(p_next, q_next, iteration);
        if (value <= current) {
            p.swap(p_next);
            q.swap(q_next);
            step *= 1.25;
            moved = true;
            return value;
        }
        step *= 0.5;
    }
    return current;
}

}  // namespace

FactorModel train_with_init(const InteractionMatrix& interactions, const PersonalityGraph& graph,
                            Eigen::VectorXd gamma, const Hyperparams& hp,
                            const TrainOptions& options, Eigen::MatrixXd P0, Eigen::MatrixXd Q0) {
    hp.validate();
    if (interactions.observed() == 0)
        throw std::invalid_argument("interaction matrix has no observed entries");
    if (gamma.size() != interactions.W.rows())
        throw std::invalid_argument("gamma length does not match user count");
    if ((gamma.array() < 0.0).any() || (gamma.array() > 1.0).any())
        throw std::invalid_argument("gamma entries must lie in [0,1]");

    FactorModel model;
    model.hp = hp;
    model.options = options;
    model.P = std::move(P0);
    model.Q = std::move(Q0);
    model.gamma = std::move(gamma);
    model.neighbors = graph.neighbors();
    check_dimensions(model, interactions, graph);

    TrainContext ctx{interactions.W,
                     mixing_matrix(model.gamma, model.neighbors, options.neighbor_mode), graph,
                     hp};

    double current = ctx.objective(model.P, model.Q, 0);
    model.objective_trace.push_back(current);

    double step = 1e-2;
    for (int iter = 1; iter <= hp.max_iters; ++iter) {
        double next;
        if (options.optimizer == Optimizer::Multiplicative) {
            multiplicative_sweep(ctx, model.P, model.Q);
            next = ctx.objective(model.P, model.Q, iter);
        } else {
            bool moved;
            next = projected_step(ctx, model.P, model.Q, current, step, iter, moved);
            if (!moved) {
                model.iterations = iter;
                break;
            }
        }
        model.objective_trace.push_back(next);
        model.iterations = iter;

        const double change = std::abs(current - next) / std::max(std::abs(current), 1e-30);
        current = next;
        if (change < hp.tol) break;
    }

    model.final_objective = current;
    return model;
}

FactorModel train(const InteractionMatrix& interactions, const PersonalityGraph& graph,
                  const KnowledgeTable& knowledge, const Hyperparams& hp,
                  const TrainOptions& options) {
    Eigen::VectorXd gamma;
    if (options.gamma_mode == GammaMode::Constant) {
        if (!(options.gamma_const >= 0.0 && options.gamma_const <= 1.0))
            throw std::invalid_argument("gamma_const must lie in [0,1]");
        gamma = Eigen::VectorXd::Constant(interactions.W.rows(), options.gamma_const);
    } else {
        gamma = knowledge.per_user_gamma();
    }

    FactorModel init = init_model(interactions.users(), interactions.items(), hp);
    return train_with_init(interactions, graph, std::move(gamma), hp, options,
                           std::move(init.P), std::move(init.Q));
}

std::vector<std::pair<int, double>> recommend_top_n(const FactorModel& model, int user, int n,
                                                    bool exclude_rated,
                                                    const InteractionMatrix& interactions) {
    if (user < 0 || user >= model.users()) throw std::invalid_argument("unknown user");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (interactions.W.rows() != model.users() || interactions.W.cols() != model.items())
        throw std::invalid_argument("interaction matrix does not match the model");

    std::vector<bool> rated(model.items(), false);
    if (exclude_rated)
        for (SpMat::InnerIterator it(interactions.W, user); it; ++it)
            rated[it.col()] = true;

    std::vector<std::pair<int, double>> scored;
    scored.reserve(model.items());
    for (int j = 0; j < model.items(); ++j) {
        if (rated[j]) continue;
        scored.emplace_back(j, predict(model, user, j));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(scored.size()) > n) scored.resize(n);
    return scored;
}

namespace {

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
    out.write(buf, 8);
}

double read_f64(std::istream& in) {
    char buf[8];
    in.read(buf, 8);
    if (!in) throw std::runtime_error("model file truncated");
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[k])) << (8 * k);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) write_f64(out, m(i, j));
}

const char* optimizer_name(Optimizer o) {
    return o == Optimizer::Multiplicative ? "multiplicative" : "projected-gradient";
}
const char* neighbor_mode_name(NeighborMode m) {
    return m == NeighborMode::Average ? "average" : "sum";
}
const char* gamma_mode_name(GammaMode m) {
    return m == GammaMode::Knowledge ? "knowledge" : "constant";
}

}  // namespace

void save_model(const FactorModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);

    char buf[256];
    out << "APAR1\n";
    out << "users " << model.users() << "\nitems " << model.items() << "\nrank " << model.hp.d
        << '\n';
    std::snprintf(buf, sizeof buf,
                  "alpha1 %.17g\nalpha2 %.17g\nlambda %.17g\nbeta %.17g\nmax_iters %d\n"
                  "tol %.17g\nseed %llu\n",
                  model.hp.alpha1, model.hp.alpha2, model.hp.lambda, model.hp.beta,
                  model.hp.max_iters, model.hp.tol,
                  static_cast<unsigned long long>(model.hp.seed));
    out << buf;
    out << "optimizer " << optimizer_name(model.options.optimizer) << '\n';
    out << "neighbor_mode " << neighbor_mode_name(model.options.neighbor_mode) << '\n';
    out << "gamma_mode " << gamma_mode_name(model.options.gamma_mode) << '\n';
    std::snprintf(buf, sizeof buf, "gamma_const %.17g\nfingerprint %016llx\n",
                  model.options.gamma_const,
                  static_cast<unsigned long long>(model.fingerprint));
    out << buf;
    std::snprintf(buf, sizeof buf, "iterations %d\nobjective %.17g\n", model.iterations,
                  model.final_objective);
    out << buf << "data\n";

    write_matrix(out, model.P);
    write_matrix(out, model.Q);
    for (int i = 0; i < model.gamma.size(); ++i) write_f64(out, model.gamma[i]);
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

FactorModel load_model(const std::string& path, std::uint64_t expected_fingerprint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);

    std::string line;
    if (!std::getline(in, line) || line != "APAR1")
        throw std::runtime_error("not an APAR1 model file: " + path);

    FactorModel model;
    int users = 0, items = 0;
    bool in_header = true;
    while (in_header && std::getline(in, line)) {
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "data") {
            in_header = false;
        } else if (key == "users") {
            fields >> users;
        } else if (key == "items") {
            fields >> items;
        } else if (key == "rank") {
            fields >> model.hp.d;
        } else if (key == "alpha1") {
            fields >> model.hp.alpha1;
        } else if (key == "alpha2") {
            fields >> model.hp.alpha2;
        } else if (key == "lambda") {
            fields >> model.hp.lambda;
        } else if (key == "beta") {
            fields >> model.hp.beta;
        } else if (key == "max_iters") {
            fields >> model.hp.max_iters;
        } else if (key == "tol") {
            fields >> model.hp.tol;
        } else if (key == "seed") {
            fields >> model.hp.seed;
        } else if (key == "optimizer") {
            std::string v;
            fields >> v;
            model.options.optimizer =
                v == "multiplicative" ? Optimizer::Multiplicative : Optimizer::ProjectedGradient;
        } else if (key == "neighbor_mode") {
            std::string v;
            fields >> v;
            model.options.neighbor_mode = v == "sum" ? NeighborMode::Sum : NeighborMode::Average;
        } else if (key == "gamma_mode") {
            std::string v;
            fields >> v;
            model.options.gamma_mode = v == "constant" ? GammaMode::Constant : GammaMode::Knowledge;
        } else if (key == "gamma_const") {
            fields >> model.options.gamma_const;
        } else if (key == "fingerprint") {
            std::string hex;
            fields >> hex;
            model.fingerprint = std::stoull(hex, nullptr, 16);
        } else if (key == "iterations") {
            fields >> model.iterations;
        } else if (key == "objective") {
            fields >> model.final_objective;
        } else {
            throw std::runtime_error("unknown model header field '" + key + "'");
        }
        if (fields.fail() && key != "data")
            throw std::runtime_error("malformed model header line: " + line);
    }
    if (in_header) throw std::runtime_error("model file has no data section: " + path);
    if (users < 1 || items < 1 || model.hp.d < 1)
        throw std::runtime_error("model header missing dimensions");

    if (expected_fingerprint != 0 && model.fingerprint != expected_fingerprint) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "model fingerprint %016llx does not match dataset fingerprint %016llx",
                      static_cast<unsigned long long>(model.fingerprint),
                      static_cast<unsigned long long>(expected_fingerprint));
        throw std::runtime_error(msg);
    }

    model.P.resize(users, model.hp.d);
    model.Q.resize(items, model.hp.d);
    model.gamma.resize(users);
    for (int i = 0; i < users; ++i)
        for (int k = 0; k < model.hp.d; ++k) model.P(i, k) = read_f64(in);
    for (int j = 0; j < items; ++j)
        for (int k = 0; k < model.hp.d; ++k) model.Q(j, k) = read_f64(in);
    for (int i = 0; i < users; ++i) model.gamma[i] = read_f64(in);

    model.neighbors.assign(users, {});
    return model;
}

void attach_graph(FactorModel& model, const PersonalityGraph& graph) {
    if (graph.size() != model.users())
        throw std::invalid_argument("personality graph size does not match the model");
    model.neighbors = graph.neighbors();
}

}  // namespace apar
