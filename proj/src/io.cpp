#include "volterra/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace volterra {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

json complex_list(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const auto& c : v) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::vector<cplx> complex_values(const json& arr) {
    std::vector<cplx> v;
    v.reserve(arr.size());
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2) throw IoError("complex value must be a [re, im] pair");
        v.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

void check_header(const json& j, const char* format) {
    if (j.value("format", "") != format) throw IoError(std::string("not a ") + format + " manifest");
    if (j.value("version", 0) != kFormatVersion) throw IoError("unsupported manifest version");
}

}  // namespace

std::string series_to_text(const VolterraSeries& s) {
    json j;
    j["format"] = "volterra-series";
    j["version"] = kFormatVersion;
    j["memory"] = s.memory();
    j["kernels"] = json::array();
    for (const auto& t : s.terms())
        j["kernels"].push_back({{"index", t.index}, {"order", t.kernel.order}, {"data", complex_list(t.kernel.coeffs.values())}});
    return j.dump(1) + "\n";
}

VolterraSeries series_from_text(const std::string& text) {
    const json j = parse_json(text);
    check_header(j, "volterra-series");
    try {
        const int memory = j.at("memory").get<int>();
        VolterraSeries s(memory);
        for (const auto& k : j.at("kernels")) {
            const int order = k.at("order").get<int>();
            std::vector<cplx> values = complex_values(k.at("data"));
            const int m = order == 0 ? 1 : memory;
            if (order == 0 && values.size() != 1) throw IoError("order-0 kernel must hold one value");
            s.add(k.at("index").get<std::string>(), VolterraKernel(order, m, std::move(values)));
        }
        return s;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed series manifest: ") + e.what());
    }
}

void write_series(const VolterraSeries& s, const std::string& path) { spit(path, series_to_text(s)); }
VolterraSeries read_series(const std::string& path) { return series_from_text(slurp(path)); }

std::string morphism_to_text(const Morphism& m) {
    json j;
    j["format"] = "volterra-morphism";
    j["version"] = kFormatVersion;
    j["length"] = m.length;
    j["source_orders"] = m.source_orders;
    j["target_orders"] = m.target_orders;
    j["phi1"] = json::array();
    j["phi"] = json::object();
    j["psi"] = json::object();
    for (const auto& [i, part] : m.parts) {
        j["phi1"].push_back({i, part.target});
        j["phi"][i] = part.phi;
        j["psi"][i] = complex_list(part.psi.values());
    }
    return j.dump(1) + "\n";
}

Morphism morphism_from_text(const std::string& text) {
    const json j = parse_json(text);
    check_header(j, "volterra-morphism");
    try {
        Morphism m;
        m.length = j.at("length").get<int>();
        m.source_orders = j.at("source_orders").get<std::map<std::string, int>>();
        m.target_orders = j.at("target_orders").get<std::map<std::string, int>>();
        for (const auto& pair : j.at("phi1")) {
            const std::string i = pair.at(0).get<std::string>();
            const int order = m.source_orders.at(i);
            MorphismPart part;
            part.target = pair.at(1).get<std::string>();
            part.phi = j.at("phi").at(i).get<IntMatrix>();
            part.psi = Tensor(order, m.length, complex_values(j.at("psi").at(i)));
            m.parts[i] = std::move(part);
        }
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed morphism manifest: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw IoError(std::string("morphism manifest references an unknown index: ") + e.what());
    }
}

void write_morphism(const Morphism& m, const std::string& path) { spit(path, morphism_to_text(m)); }
Morphism read_morphism(const std::string& path) { return morphism_from_text(slurp(path)); }

SampledSignal read_signal_csv(std::istream& in) {
    SampledSignal s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        double re = 0.0, im = 0.0;
        char comma = 0;
        if (!(row >> re)) throw IoError("signal CSV line " + std::to_string(lineno) + ": expected a number");
        if (row >> comma) {
            if (comma != ',' || !(row >> im)) throw IoError("signal CSV line " + std::to_string(lineno) + ": expected re,im");
        }
        s.emplace_back(re, im);
    }
    if (s.empty()) throw IoError("signal CSV holds no samples");
    return s;
}

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_signal_csv(in);
}

void write_signal_csv(const SampledSignal& s, std::ostream& out) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& v : s) out << v.real() << ',' << v.imag() << '\n';
}

void write_signal_csv(const SampledSignal& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_signal_csv(s, out);
}

void write_grid_csv(const TFDGrid& g, std::ostream& out) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int n = 0; n < g.rows; ++n) {
        for (int k = 0; k < g.cols; ++k) out << (k ? "," : "") << g.at(n, k).real();
        out << '\n';
    }
}

void write_grid_csv(const TFDGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_grid_csv(g, out);
}

void write_pgm(const TFDGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << g.cols << ' ' << g.rows << "\n255\n";
    const double peak = g.max_abs();
    std::vector<unsigned char> row(static_cast<std::size_t>(g.cols));
    for (int n = 0; n < g.rows; ++n) {
        for (int k = 0; k < g.cols; ++k) {
            const double v = peak > 0.0 ? std::abs(g.at(n, k)) / peak : 0.0;
            row[static_cast<std::size_t>(k)] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
}

}  // namespace volterra
