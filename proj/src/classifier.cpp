#include "calsim/classifier.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace calsim {

namespace {

// rng() % n is biased by at most n/2^64; acceptable and portable.
inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

}  // namespace

ModelState train(const std::vector<LabeledExample>& examples, const TrainParams& params,
                 std::size_t dim,
                 const std::function<void(std::uint64_t, double)>& observer) {
    if (params.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (params.iterations < 1) throw std::invalid_argument("iterations must be >= 1");

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (examples[i].label > 0) pos.push_back(i);
        else neg.push_back(i);
    }
    if (pos.empty() || neg.empty())
        throw std::runtime_error("training requires at least one positive and one negative example");

    // w is kept as scale * v so the per-step shrinkage (1 - 1/t) is O(1);
    // vnorm2 tracks ||v||^2 incrementally for the projection step.
    std::vector<double> v(dim, 0.0);
    double scale = 1.0;
    double vnorm2 = 0.0;
    const double radius = 1.0 / std::sqrt(params.lambda);

    std::mt19937_64 rng(params.seed);
    for (std::uint64_t t = 1; t <= params.iterations; ++t) {
        const SparseVector& xp = examples[pos[bounded(rng, pos.size())]].vector;
        const SparseVector& xn = examples[neg[bounded(rng, neg.size())]].vector;
        SparseVector d = diff(xp, xn);

        double margin = scale * dot(v, d);
        double sig = 1.0 / (1.0 + std::exp(margin));  // sigmoid(-w.d)
        double eta = 1.0 / (params.lambda * double(t));

        double shrink = 1.0 - 1.0 / double(t);
        if (shrink == 0.0) {
            std::fill(v.begin(), v.end(), 0.0);
            scale = 1.0;
            vnorm2 = 0.0;
        } else {
            scale *= shrink;
        }
        double coef = eta * sig / scale;
        for (const auto& [id, val] : d.entries) {
            double add = coef * val;
            vnorm2 += add * (2.0 * v[id] + add);
            v[id] += add;
        }
        double norm = scale * std::sqrt(std::max(vnorm2, 0.0));
        if (norm > radius) scale *= radius / norm;
        if (observer) observer(t, scale * std::sqrt(std::max(vnorm2, 0.0)));
    }

    ModelState model;
    model.params = params;
    model.weights.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) model.weights[i] = scale * v[i];
    return model;
}

std::vector<double> score_all(const ModelState& model,
                              const std::vector<const SparseVector*>& items,
                              unsigned threads) {
    std::vector<double> out(items.size());
    if (threads <= 1 || items.size() < 1024) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = model.score(*items[i]);
        return out;
    }
    std::vector<std::thread> workers;
    std::size_t chunk = (items.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        std::size_t lo = std::min(items.size(), std::size_t(w) * chunk);
        std::size_t hi = std::min(items.size(), lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = model.score(*items[i]);
        });
    }
    for (auto& t : workers) t.join();
    return out;
}

void ModelState::save_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out.precision(17);
    out << "lambda\t" << params.lambda << "\titerations\t" << params.iterations << "\tseed\t"
        << params.seed << "\n";
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] != 0.0) out << i << "\t" << weights[i] << "\n";
}

ModelState ModelState::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    ModelState model;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty model file: " + path);
    {
        std::istringstream ss(line);
        std::string k1, k2, k3;
        if (!(ss >> k1 >> model.params.lambda >> k2 >> model.params.iterations >> k3 >>
              model.params.seed) ||
            k1 != "lambda" || k2 != "iterations" || k3 != "seed")
            throw std::runtime_error("bad model header in " + path);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t id;
        double w;
        if (!(ss >> id >> w)) throw std::runtime_error("malformed model line in " + path);
        if (model.weights.size() <= id) model.weights.resize(id + 1, 0.0);
        model.weights[id] = w;
    }
    return model;
}

}  // namespace calsim
