#include "daga/autoencoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace daga {

namespace {

constexpr double kOutputClamp = 1e-12;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double clamp_unit(double z) { return std::min(1.0 - kOutputClamp, std::max(kOutputClamp, z)); }

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t double_bits(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

double bits_double(std::uint64_t u) {
    double v;
    std::memcpy(&v, &u, sizeof v);
    return v;
}

} // namespace

std::vector<double> corrupt(const std::vector<double>& x, const CorruptionSpec& spec,
                            RandomSource& rng) {
    if (spec.rate < 0.0 || spec.rate > 1.0)
        throw InvalidConfigError("corruption rate must lie in [0, 1]");
    std::vector<double> out = x;
    if (spec.kind == CorruptionKind::BitFlip) {
        const auto n = x.size();
        const auto flips = static_cast<std::size_t>(
            std::llround(spec.rate * static_cast<double>(n)));
        if (flips == 0) return out;
        // Partial Fisher-Yates: the first `flips` slots end up as a uniform
        // sample of distinct positions.
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < flips; ++i) {
            const std::size_t j = i + rng.uniform_below(n - i);
            std::swap(idx[i], idx[j]);
            out[idx[i]] = 1.0 - out[idx[i]];
        }
    } else {
        for (auto& v : out) {
            v += rng.normal(0.0, spec.rate);
            v = std::min(1.0, std::max(0.0, v));
        }
    }
    return out;
}

DenoisingAutoencoder::DenoisingAutoencoder(std::size_t visible, std::size_t hidden,
                                           RandomSource& rng)
    : visible_(visible), hidden_(hidden) {
    if (visible < 1 || hidden < 1)
        throw InvalidConfigError("autoencoder sizes must be >= 1");
    w_.resize(hidden * visible);
    b_.assign(hidden, 0.0);
    w_prime_.resize(visible * hidden);
    b_prime_.assign(visible, 0.0);
    const double enc_bound = 1.0 / std::sqrt(static_cast<double>(visible));
    const double dec_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& v : w_) v = rng.uniform(-enc_bound, enc_bound);
    for (auto& v : w_prime_) v = rng.uniform(-dec_bound, dec_bound);
}

std::vector<double> DenoisingAutoencoder::encode(const std::vector<double>& x) const {
    if (x.size() != visible_)
        throw GenomeTypeError("encode: input length " + std::to_string(x.size()) +
                              " != visible size " + std::to_string(visible_));
    std::vector<double> h(hidden_);
    for (std::size_t j = 0; j < hidden_; ++j) {
        const double* row = &w_[j * visible_];
        double acc = b_[j];
        for (std::size_t k = 0; k < visible_; ++k) acc += row[k] * x[k];
        h[j] = sigmoid(acc);
    }
    return h;
}

std::vector<double> DenoisingAutoencoder::decode(const std::vector<double>& h) const {
    if (h.size() != hidden_)
        throw GenomeTypeError("decode: input length " + std::to_string(h.size()) +
                              " != hidden size " + std::to_string(hidden_));
    std::vector<double> z(visible_);
    for (std::size_t i = 0; i < visible_; ++i) {
        const double* row = &w_prime_[i * hidden_];
        double acc = b_prime_[i];
        for (std::size_t j = 0; j < hidden_; ++j) acc += row[j] * h[j];
        z[i] = clamp_unit(sigmoid(acc));
    }
    return z;
}

double DenoisingAutoencoder::forward(const std::vector<double>& input,
                                     const std::vector<double>& target, LossKind loss,
                                     std::vector<double>& hidden_out,
                                     std::vector<double>& output_raw) const {
    hidden_out.resize(hidden_);
    for (std::size_t j = 0; j < hidden_; ++j) {
        const double* row = &w_[j * visible_];
        double acc = b_[j];
        for (std::size_t k = 0; k < visible_; ++k) acc += row[k] * input[k];
        hidden_out[j] = sigmoid(acc);
    }
    output_raw.resize(visible_);
    double total = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < visible_; ++i) {
        const double* row = &w_prime_[i * hidden_];
        double acc = b_prime_[i];
        for (std::size_t j = 0; j < hidden_; ++j) acc += row[j] * hidden_out[j];
        const double z = sigmoid(acc);
        output_raw[i] = z;
        finite = finite && std::isfinite(z);  // clamping below would mask a NaN
        if (loss == LossKind::CrossEntropy) {
            const double zc = clamp_unit(z);
            total -= target[i] * std::log(zc) + (1.0 - target[i]) * std::log(1.0 - zc);
        } else {
            const double d = z - target[i];
            total += 0.5 * d * d;
        }
    }
    return finite ? total : std::numeric_limits<double>::quiet_NaN();
}

double DenoisingAutoencoder::train(const std::vector<std::vector<double>>& batch,
                                   const TrainConfig& cfg, RandomSource& rng) {
    if (batch.empty()) throw InvalidConfigError("train: empty batch");
    for (const auto& x : batch)
        if (x.size() != visible_)
            throw GenomeTypeError("train: example length " + std::to_string(x.size()) +
                                  " != visible size " + std::to_string(visible_));
    if (cfg.epochs < 0) throw InvalidConfigError("train: negative epoch count");
    if (cfg.learning_rate <= 0.0) throw InvalidConfigError("train: learning rate must be > 0");

    std::vector<double> hidden, z;
    if (cfg.epochs == 0) {
        double total = 0.0;
        for (const auto& x : batch) total += forward(x, x, cfg.loss, hidden, z);
        return total / (static_cast<double>(batch.size()) * static_cast<double>(visible_));
    }

    const std::size_t mb =
        cfg.minibatch_size == 0 ? batch.size() : std::min(cfg.minibatch_size, batch.size());

    std::vector<double> grad_w(w_.size()), grad_b(b_.size());
    std::vector<double> grad_wp(w_prime_.size()), grad_bp(b_prime_.size());
    std::vector<double> dpre_out(visible_), dpre_hidden(hidden_);

    double epoch_loss = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        epoch_loss = 0.0;
        std::size_t in_minibatch = 0;
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        std::fill(grad_wp.begin(), grad_wp.end(), 0.0);
        std::fill(grad_bp.begin(), grad_bp.end(), 0.0);

        for (std::size_t e = 0; e < batch.size(); ++e) {
            const auto corrupted = corrupt(batch[e], cfg.corruption, rng);
            const double loss = forward(corrupted, batch[e], cfg.loss, hidden, z);
            if (!std::isfinite(loss))
                throw NumericError("training loss became non-finite (epoch " +
                                   std::to_string(epoch) + ")");
            epoch_loss += loss;

            // Output pre-activation gradient. Sigmoid + cross-entropy collapses
            // to (z - x); squared error keeps the sigmoid derivative.
            for (std::size_t i = 0; i < visible_; ++i) {
                const double d = z[i] - batch[e][i];
                dpre_out[i] =
                    cfg.loss == LossKind::CrossEntropy ? d : d * z[i] * (1.0 - z[i]);
            }
            for (std::size_t i = 0; i < visible_; ++i) {
                double* grow = &grad_wp[i * hidden_];
                const double d = dpre_out[i];
                for (std::size_t j = 0; j < hidden_; ++j) grow[j] += d * hidden[j];
                grad_bp[i] += d;
            }
            std::fill(dpre_hidden.begin(), dpre_hidden.end(), 0.0);
            for (std::size_t i = 0; i < visible_; ++i) {
                const double* row = &w_prime_[i * hidden_];
                const double d = dpre_out[i];
                for (std::size_t j = 0; j < hidden_; ++j) dpre_hidden[j] += row[j] * d;
            }
            for (std::size_t j = 0; j < hidden_; ++j) dpre_hidden[j] *= hidden[j] * (1.0 - hidden[j]);
            for (std::size_t j = 0; j < hidden_; ++j) {
                double* grow = &grad_w[j * visible_];
                const double d = dpre_hidden[j];
                for (std::size_t k = 0; k < visible_; ++k) grow[k] += d * corrupted[k];
                grad_b[j] += d;
            }

            ++in_minibatch;
            const bool flush = in_minibatch == mb || e + 1 == batch.size();
            if (flush) {
                const double step = cfg.learning_rate / static_cast<double>(in_minibatch);
                for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= step * grad_w[i];
                for (std::size_t i = 0; i < b_.size(); ++i) b_[i] -= step * grad_b[i];
                for (std::size_t i = 0; i < w_prime_.size(); ++i) w_prime_[i] -= step * grad_wp[i];
                for (std::size_t i = 0; i < b_prime_.size(); ++i) b_prime_[i] -= step * grad_bp[i];
                std::fill(grad_w.begin(), grad_w.end(), 0.0);
                std::fill(grad_b.begin(), grad_b.end(), 0.0);
                std::fill(grad_wp.begin(), grad_wp.end(), 0.0);
                std::fill(grad_bp.begin(), grad_bp.end(), 0.0);
                in_minibatch = 0;
            }
        }
    }
    return epoch_loss / (static_cast<double>(batch.size()) * static_cast<double>(visible_));
}

double DenoisingAutoencoder::gradient_check(const std::vector<double>& x, LossKind loss,
                                            double epsilon) {
    if (epsilon < 1e-7 || epsilon > 1e-3)
        throw InvalidConfigError("gradient_check: epsilon must lie in [1e-7, 1e-3]");

    // Analytic gradient of the uncorrupted reconstruction loss at x.
    std::vector<double> hidden, z;
    forward(x, x, loss, hidden, z);
    std::vector<double> dpre_out(visible_), dpre_hidden(hidden_, 0.0);
    for (std::size_t i = 0; i < visible_; ++i) {
        const double d = z[i] - x[i];
        dpre_out[i] = loss == LossKind::CrossEntropy ? d : d * z[i] * (1.0 - z[i]);
    }
    std::vector<double> analytic(parameter_count());
    double* grad_w = analytic.data();
    double* grad_b = grad_w + w_.size();
    double* grad_wp = grad_b + b_.size();
    double* grad_bp = grad_wp + w_prime_.size();
    for (std::size_t i = 0; i < visible_; ++i) {
        const double d = dpre_out[i];
        for (std::size_t j = 0; j < hidden_; ++j) grad_wp[i * hidden_ + j] = d * hidden[j];
        grad_bp[i] = d;
    }
    for (std::size_t i = 0; i < visible_; ++i) {
        const double d = dpre_out[i];
        for (std::size_t j = 0; j < hidden_; ++j) dpre_hidden[j] += w_prime_[i * hidden_ + j] * d;
    }
    for (std::size_t j = 0; j < hidden_; ++j) dpre_hidden[j] *= hidden[j] * (1.0 - hidden[j]);
    for (std::size_t j = 0; j < hidden_; ++j) {
        const double d = dpre_hidden[j];
        for (std::size_t k = 0; k < visible_; ++k) grad_w[j * visible_ + k] = d * x[k];
        grad_b[j] = d;
    }

    // Central finite differences over every parameter.
    std::vector<double> params = parameters();
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double saved = params[p];
        params[p] = saved + epsilon;
        set_parameters(params);
        const double plus = forward(x, x, loss, hidden, z);
        params[p] = saved - epsilon;
        set_parameters(params);
        const double minus = forward(x, x, loss, hidden, z);
        params[p] = saved;
        const double numeric = (plus - minus) / (2.0 * epsilon);
        const double denom = std::max({std::fabs(analytic[p]), std::fabs(numeric), 1e-8});
        worst = std::max(worst, std::fabs(analytic[p] - numeric) / denom);
    }
    set_parameters(params);
    return worst;
}

std::size_t DenoisingAutoencoder::parameter_count() const {
    return w_.size() + b_.size() + w_prime_.size() + b_prime_.size();
}

std::vector<double> DenoisingAutoencoder::parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    out.insert(out.end(), w_.begin(), w_.end());
    out.insert(out.end(), b_.begin(), b_.end());
    out.insert(out.end(), w_prime_.begin(), w_prime_.end());
    out.insert(out.end(), b_prime_.begin(), b_prime_.end());
    return out;
}

void DenoisingAutoencoder::set_parameters(const std::vector<double>& params) {
    if (params.size() != parameter_count())
        throw InvalidConfigError("set_parameters: wrong parameter count");
    auto it = params.begin();
    std::copy(it, it + static_cast<long>(w_.size()), w_.begin());
    it += static_cast<long>(w_.size());
    std::copy(it, it + static_cast<long>(b_.size()), b_.begin());
    it += static_cast<long>(b_.size());
    std::copy(it, it + static_cast<long>(w_prime_.size()), w_prime_.begin());
    it += static_cast<long>(w_prime_.size());
    std::copy(it, it + static_cast<long>(b_prime_.size()), b_prime_.begin());
}

namespace {

// Weight files are plain text: a header line, one hex-encoded IEEE-754 bit
// pattern per parameter (16 digits), and a trailing fnv1a checksum over the
// sizes and parameter bits. Hex bit patterns round-trip exactly.
constexpr const char* kWeightMagic = "daga-weights";
constexpr int kWeightVersion = 1;

struct Tokenizer {
    const std::string& text;
    std::size_t pos = 0;
    long line = 1;

    bool next(std::string& token) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            if (text[pos] == '\n') ++line;
            ++pos;
        }
        if (pos >= text.size()) return false;
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        token = text.substr(start, pos - start);
        return true;
    }

    std::string require(const char* what) {
        std::string token;
        if (!next(token))
            throw ParseError(std::string("unexpected end of weight file, expected ") + what, line,
                             static_cast<long long>(pos));
        return token;
    }
};

std::uint64_t parse_hex_u64(const std::string& token, const Tokenizer& tok, const char* what) {
    if (token.size() != 16 || token.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw ParseError(std::string("malformed ") + what + " token '" + token + "'", tok.line,
                         static_cast<long long>(tok.pos - token.size()));
    std::uint64_t value = 0;
    for (char c : token) value = (value << 4) | static_cast<std::uint64_t>(c <= '9' ? c - '0' : c - 'a' + 10);
    return value;
}

std::uint64_t checksum(std::size_t visible, std::size_t hidden,
                       const std::vector<double>& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const std::uint64_t v = visible, hd = hidden;
    h = fnv1a(h, &v, sizeof v);
    h = fnv1a(h, &hd, sizeof hd);
    for (double p : params) {
        const std::uint64_t bits = double_bits(p);
        h = fnv1a(h, &bits, sizeof bits);
    }
    return h;
}

void write_hex(std::string& out, std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    char buf[16];
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[v & 0xf];
        v >>= 4;
    }
    out.append(buf, 16);
}

} // namespace

void DenoisingAutoencoder::save_weights(const std::string& path) const {
    const auto params = parameters();
    std::string out;
    out.reserve(params.size() * 17 + 128);
    out += kWeightMagic;
    out += ' ';
    out += std::to_string(kWeightVersion);
    out += ' ';
    out += std::to_string(visible_);
    out += ' ';
    out += std::to_string(hidden_);
    out += '\n';
    for (std::size_t i = 0; i < params.size(); ++i) {
        write_hex(out, double_bits(params[i]));
        out += (i + 1) % 8 == 0 ? '\n' : ' ';
    }
    if (!out.empty() && out.back() != '\n') out += '\n';
    out += "crc ";
    write_hex(out, checksum(visible_, hidden_, params));
    out += '\n';

    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open weight file for writing: " + path, 0);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw ParseError("failed writing weight file: " + path, 0);
}

DenoisingAutoencoder DenoisingAutoencoder::load_weights(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open weight file: " + path, 0);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();

    Tokenizer tok{text};
    if (tok.require("magic") != kWeightMagic)
        throw ParseError("not a weight file (bad magic)", tok.line, 0);
    const std::string version = tok.require("version");
    if (version != std::to_string(kWeightVersion))
        throw ParseError("unsupported weight file version " + version, tok.line,
                         static_cast<long long>(tok.pos));

    DenoisingAutoencoder dae;
    try {
        dae.visible_ = std::stoul(tok.require("visible size"));
        dae.hidden_ = std::stoul(tok.require("hidden size"));
    } catch (const std::logic_error&) {
        throw ParseError("malformed size in weight file header", tok.line,
                         static_cast<long long>(tok.pos));
    }
    if (dae.visible_ < 1 || dae.hidden_ < 1)
        throw ParseError("weight file sizes must be >= 1", tok.line,
                         static_cast<long long>(tok.pos));

    dae.w_.resize(dae.hidden_ * dae.visible_);
    dae.b_.resize(dae.hidden_);
    dae.w_prime_.resize(dae.visible_ * dae.hidden_);
    dae.b_prime_.resize(dae.visible_);

    std::vector<double> params(dae.parameter_count());
    for (auto& p : params)
        p = bits_double(parse_hex_u64(tok.require("parameter"), tok, "parameter"));

    if (tok.require("checksum tag") != "crc")
        throw ParseError("missing checksum line", tok.line, static_cast<long long>(tok.pos));
    const std::uint64_t stored = parse_hex_u64(tok.require("checksum"), tok, "checksum");
    const std::uint64_t actual = checksum(dae.visible_, dae.hidden_, params);
    if (stored != actual)
        throw ParseError("checksum mismatch in weight file " + path, tok.line,
                         static_cast<long long>(tok.pos));

    dae.set_parameters(params);
    return dae;
}

} // namespace daga
