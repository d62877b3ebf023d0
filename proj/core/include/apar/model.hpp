#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apar/errors.hpp"
#include "apar/interaction.hpp"
#include "apar/knowledge.hpp"
#include "apar/personality.hpp"

namespace apar {

struct Hyperparams {
    int d = 100;            // latent dimension
    double alpha1 = 0.1;    // Frobenius weight on user factors
    double alpha2 = 0.1;    // Frobenius weight on item factors
    double lambda = 0.1;    // personality-regularization weight
    double beta = 0.5;      // personal-preference weight inside gamma
    int max_iters = 500;
    double tol = 1e-5;      // relative objective change
    std::uint64_t seed = 0;

    void validate() const;
};

/// Stabilizer added to both sides of the multiplicative update ratio;
/// keeps 0/0 entries fixed and factors strictly positive.
inline constexpr double kMultiplicativeUpdateEps = 1e-15;

enum class Optimizer { Multiplicative, ProjectedGradient };
enum class NeighborMode { Average, Sum };
enum class GammaMode { Knowledge, Constant };

struct TrainOptions {
    Optimizer optimizer = Optimizer::Multiplicative;
    /// Average divides the same-personality term by |phi+|, keeping
    /// predictions on the rating scale; Sum is the literal form.
    NeighborMode neighbor_mode = NeighborMode::Average;
    GammaMode gamma_mode = GammaMode::Knowledge;
    double gamma_const = 0.5;  // used by GammaMode::Constant
};

/// Trained factors plus everything a prediction needs: the per-user mixing
/// coefficient and the same-personality neighbor sets. Neighbor sets are
/// derived from the personality graph and are not persisted; reattach them
/// after load_model.
struct FactorModel {
    Eigen::MatrixXd P;  // M x d user factors
    Eigen::MatrixXd Q;  // N x d item factors
    Eigen::VectorXd gamma;
    std::vector<std::vector<int>> neighbors;

    Hyperparams hp;
    TrainOptions options;
    double final_objective = 0.0;
    int iterations = 0;
    std::vector<double> objective_trace;
    std::uint64_t fingerprint = 0;

    int users() const { return static_cast<int>(P.rows()); }
    int items() const { return static_cast<int>(Q.rows()); }
};

/// P, Q filled i.i.d. uniform on (0, 0.01], deterministic per seed.
FactorModel init_model(int users, int items, const Hyperparams& hp);

/// gamma <p_i,q_j> + (1-gamma) * averaged same-personality term; plain
/// <p_i,q_j> when the user has no neighbors.
double predict(const FactorModel& model, int user, int item);

/// 1/2 sum over observed (w_ij - prediction)^2
///   + lambda * Tr(P^T Y P) + alpha1 ||P||_F^2 + alpha2 ||Q||_F^2.
double objective(const FactorModel& model, const InteractionMatrix& interactions,
                 const PersonalityGraph& graph, const Hyperparams& hp);

/// Analytic gradient of the objective, neighbor coupling included.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradients(const FactorModel& model,
                                                      const InteractionMatrix& interactions,
                                                      const PersonalityGraph& graph,
                                                      const Hyperparams& hp);

/// Train from a seeded random initialization. Multiplicative updates keep
/// every factor entry strictly positive and the objective non-increasing;
/// projected gradient descent backtracks until each step decreases it.
FactorModel train(const InteractionMatrix& interactions, const PersonalityGraph& graph,
                  const KnowledgeTable& knowledge, const Hyperparams& hp,
                  const TrainOptions& options = {});

/// Same, but from caller-supplied factors and mixing coefficients.
FactorModel train_with_init(const InteractionMatrix& interactions, const PersonalityGraph& graph,
                            Eigen::VectorXd gamma, const Hyperparams& hp,
                            const TrainOptions& options, Eigen::MatrixXd P0, Eigen::MatrixXd Q0);

/// Items sorted by predicted score descending, ties by item index.
std::vector<std::pair<int, double>> recommend_top_n(const FactorModel& model, int user, int n,
                                                    bool exclude_rated,
                                                    const InteractionMatrix& interactions);

/// Container file: "APAR1" text header (dimensions, hyperparameters,
/// dataset fingerprint) followed by row-major little-endian f64 dumps of
/// P, Q, and gamma.
void save_model(const FactorModel& model, const std::string& path);

/// Parses the container; throws std::runtime_error if expected_fingerprint
/// is nonzero and does not match the stored one.
FactorModel load_model(const std::string& path, std::uint64_t expected_fingerprint = 0);

void attach_graph(FactorModel& model, const PersonalityGraph& graph);

}  // namespace apar
