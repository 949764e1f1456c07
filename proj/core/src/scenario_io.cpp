#include "photostat/scenario_io.hpp"

#include "photostat/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace photostat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void fail(int line_no, const std::string& message) {
    throw config_error("scenario line " + std::to_string(line_no) + ": " + message);
}

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> words;
    std::istringstream iss(s);
    std::string w;
    while (iss >> w)
        words.push_back(w);
    return words;
}

double parse_double(const std::string& word, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(word, &pos);
        if (pos != word.size())
            fail(line_no, "bad number '" + word + "'");
        return v;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(line_no, "bad number '" + word + "'");
    }
}

long long parse_int(const std::string& word, int line_no) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(word, &pos);
        if (pos != word.size())
            fail(line_no, "bad integer '" + word + "'");
        return v;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(line_no, "bad integer '" + word + "'");
    }
}

std::uint64_t parse_u64(const std::string& word, int line_no) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(word, &pos);
        if (pos != word.size())
            fail(line_no, "bad unsigned integer '" + word + "'");
        return v;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(line_no, "bad unsigned integer '" + word + "'");
    }
}

CovarianceSpec parse_covariance(const std::string& value, int line_no) {
    if (value == "off")
        return CovarianceSpec::off();
    if (value == "full")
        return CovarianceSpec::full();
    const std::string prefix = "slices=";
    if (value.rfind(prefix, 0) == 0) {
        std::vector<int> rows;
        std::string item;
        std::istringstream iss(value.substr(prefix.size()));
        while (std::getline(iss, item, ','))
            rows.push_back(static_cast<int>(parse_int(strip(item), line_no)));
        if (rows.empty())
            fail(line_no, "slices= needs at least one row");
        return CovarianceSpec::slices(std::move(rows));
    }
    fail(line_no, "covariance must be off, full or slices=<rows>");
}

struct Builder {
    std::optional<std::size_t> length;
    std::vector<double> flux, object_q;

    std::optional<double> psf_sigma;
    std::optional<int> psf_half_width;
    std::optional<std::vector<double>> psf_weights;

    std::optional<double> noise_mean, noise_q;
    std::vector<double> noise_mean_px, noise_q_px;
    bool noise_per_pixel = false;

    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
    CovarianceSpec covariance = CovarianceSpec::off();

    void require_length(int line_no) const {
        if (!length)
            fail(line_no, "[object] length must come before source lines");
    }

    std::size_t checked_pos(long long k, int line_no) const {
        if (k < 0 || static_cast<std::size_t>(k) >= *length)
            fail(line_no, "position out of range [0, length)");
        return static_cast<std::size_t>(k);
    }
};

Scenario build(Builder& b, int line_no) {
    if (!b.length)
        throw config_error("scenario: missing [object] length");
    const std::size_t k_count = *b.length;

    Psf psf = [&] {
        if (b.psf_weights)
            return Psf(*b.psf_weights);
        if (!b.psf_sigma)
            throw config_error("scenario: [psf] needs sigma or weights");
        const int half = b.psf_half_width ? *b.psf_half_width
                                          : default_gaussian_half_width(*b.psf_sigma);
        return make_gaussian_psf(*b.psf_sigma, half);
    }();

    NoiseModel noise = [&] {
        if (b.noise_per_pixel)
            return NoiseModel(b.noise_mean_px, b.noise_q_px);
        return NoiseModel::flat(k_count, b.noise_mean.value_or(0.0), b.noise_q.value_or(0.0));
    }();

    try {
        return Scenario(ObjectModel(b.flux, b.object_q), std::move(psf), std::move(noise),
                        b.samples, b.seed, b.covariance);
    } catch (const std::invalid_argument& e) {
        fail(line_no, e.what());
    }
}

} // namespace

Scenario parse_scenario(std::istream& in) {
    Builder b;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string line = strip(raw);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "object" && section != "psf" && section != "noise" && section != "run")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        if (section.empty())
            fail(line_no, "content before any section header");

        const auto eq = line.find('=');
        if (eq != std::string::npos && section != "object") {
            const std::string key = strip(line.substr(0, eq));
            const std::string value = strip(line.substr(eq + 1));
            if (value.empty())
                fail(line_no, "missing value for '" + key + "'");
            if (section == "psf") {
                if (key == "sigma") {
                    b.psf_sigma = parse_double(value, line_no);
                } else if (key == "half_width") {
                    b.psf_half_width = static_cast<int>(parse_int(value, line_no));
                } else if (key == "weights") {
                    std::vector<double> w;
                    for (const auto& word : split_words(value))
                        w.push_back(parse_double(word, line_no));
                    b.psf_weights = std::move(w);
                } else {
                    fail(line_no, "unknown [psf] key '" + key + "'");
                }
            } else if (section == "noise") {
                if (key == "mean")
                    b.noise_mean = parse_double(value, line_no);
                else if (key == "q")
                    b.noise_q = parse_double(value, line_no);
                else
                    fail(line_no, "unknown [noise] key '" + key + "'");
            } else { // run
                if (key == "samples")
                    b.samples = parse_u64(value, line_no);
                else if (key == "seed")
                    b.seed = parse_u64(value, line_no);
                else if (key == "covariance")
                    b.covariance = parse_covariance(value, line_no);
                else
                    fail(line_no, "unknown [run] key '" + key + "'");
            }
            continue;
        }

        if (section == "object" && eq != std::string::npos) {
            if (strip(line.substr(0, eq)) != "length")
                fail(line_no, "unknown [object] key '" + strip(line.substr(0, eq)) + "'");
            const long long k_count = parse_int(strip(line.substr(eq + 1)), line_no);
            if (k_count < 1)
                fail(line_no, "length must be positive");
            b.length = static_cast<std::size_t>(k_count);
            b.flux.assign(*b.length, 0.0);
            b.object_q.assign(*b.length, 0.0);
            continue;
        }

        const auto words = split_words(line);
        if (section == "object") {
            if (words.empty())
                fail(line_no, "unrecognized [object] line");
            b.require_length(line_no);
            const std::string& kind = words[0];
            if (kind == "background" && words.size() == 3) {
                const double flux = parse_double(words[1], line_no);
                const double q = parse_double(words[2], line_no);
                for (std::size_t k = 0; k < *b.length; ++k) {
                    b.flux[k] = flux;
                    b.object_q[k] = q;
                }
            } else if (kind == "point" && words.size() == 4) {
                const auto pos = b.checked_pos(parse_int(words[1], line_no), line_no);
                b.flux[pos] = parse_double(words[2], line_no);
                b.object_q[pos] = parse_double(words[3], line_no);
            } else if (kind == "pixel" && words.size() == 4) {
                const auto pos = b.checked_pos(parse_int(words[1], line_no), line_no);
                b.flux[pos] = parse_double(words[2], line_no);
                b.object_q[pos] = parse_double(words[3], line_no);
            } else if (kind == "extended" && words.size() == 6) {
                const auto first = b.checked_pos(parse_int(words[1], line_no), line_no);
                const auto last = b.checked_pos(parse_int(words[2], line_no), line_no);
                if (last < first)
                    fail(line_no, "extended source has last < first");
                const double mean = parse_double(words[3], line_no);
                const double amplitude = parse_double(words[4], line_no);
                const double q = parse_double(words[5], line_no);
                const double period = double(last - first + 1);
                for (std::size_t k = first; k <= last; ++k) {
                    b.flux[k] = mean + amplitude * std::sin(kTwoPi * double(k - first) / period);
                    b.object_q[k] = q;
                }
            } else {
                fail(line_no, "unrecognized [object] line '" + line + "'");
            }
        } else if (section == "noise") {
            if (words.size() == 4 && words[0] == "pixel") {
                b.require_length(line_no);
                if (!b.noise_per_pixel) {
                    b.noise_per_pixel = true;
                    b.noise_mean_px.assign(*b.length, b.noise_mean.value_or(0.0));
                    b.noise_q_px.assign(*b.length, b.noise_q.value_or(0.0));
                }
                const auto pos = b.checked_pos(parse_int(words[1], line_no), line_no);
                b.noise_mean_px[pos] = parse_double(words[2], line_no);
                b.noise_q_px[pos] = parse_double(words[3], line_no);
            } else {
                fail(line_no, "unrecognized [noise] line '" + line + "'");
            }
        } else {
            fail(line_no, "unrecognized line '" + line + "' in [" + section + "]");
        }
    }
    return build(b, line_no);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open scenario file: " + path);
    return parse_scenario(in);
}

std::string format_scenario(const Scenario& scenario) {
    char buf[256];
    std::string out;
    auto emit = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
    };

    out += "[object]\n";
    emit("length = %zu\n", scenario.object.size());
    for (std::size_t k = 0; k < scenario.object.size(); ++k)
        emit("pixel %zu %.17g %.17g\n", k, scenario.object.mean_flux(k), scenario.object.q(k));

    out += "\n[psf]\n";
    out += "weights =";
    for (double w : scenario.psf.weights())
        emit(" %.17g", w);
    out += "\n";

    out += "\n[noise]\n";
    bool flat = true;
    for (std::size_t k = 1; k < scenario.noise.size() && flat; ++k)
        flat = scenario.noise.mean(k) == scenario.noise.mean(0) &&
               scenario.noise.q(k) == scenario.noise.q(0);
    if (flat) {
        emit("mean = %.17g\n", scenario.noise.mean(0));
        emit("q = %.17g\n", scenario.noise.q(0));
    } else {
        for (std::size_t k = 0; k < scenario.noise.size(); ++k)
            emit("pixel %zu %.17g %.17g\n", k, scenario.noise.mean(k), scenario.noise.q(k));
    }

    out += "\n[run]\n";
    emit("samples = %llu\n", static_cast<unsigned long long>(scenario.n_samples));
    emit("seed = %llu\n", static_cast<unsigned long long>(scenario.master_seed));
    switch (scenario.covariance.mode) {
    case CovarianceMode::off:
        out += "covariance = off\n";
        break;
    case CovarianceMode::full:
        out += "covariance = full\n";
        break;
    case CovarianceMode::slices:
        out += "covariance = slices=";
        for (std::size_t i = 0; i < scenario.covariance.rows.size(); ++i) {
            if (i)
                out += ",";
            out += std::to_string(scenario.covariance.rows[i]);
        }
        out += "\n";
        break;
    }
    return out;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot write scenario file: " + path);
    out << format_scenario(scenario);
    if (!out)
        throw io_error("error writing scenario file: " + path);
}

} // namespace photostat
