#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "switchlab/channel.hpp"
#include "switchlab/classify.hpp"
#include "switchlab/scan.hpp"

namespace switchlab {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Floats are printed with 12 significant digits everywhere a file is
/// written, enough to re-verify the 1e-9 tolerances downstream.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Channel serialization: {"kind": "pauli" | "tmatrix" | "kraus", ...}
// Complex matrices are stored as row-major "re"/"im" arrays.
// ---------------------------------------------------------------------------

inline json to_json(const PauliChannel& pc) {
    return json{{"kind", "pauli"},
                {"p", {pc.probs()[0], pc.probs()[1], pc.probs()[2], pc.probs()[3]}}};
}

inline json to_json(const TMatrix& t) {
    std::vector<double> m;
    m.reserve(16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m.push_back(t.m()(i, j));
    return json{{"kind", "tmatrix"}, {"m", m}};
}

inline json kraus_to_json(const std::vector<Mat2>& kraus) {
    json ops = json::array();
    for (const auto& k : kraus) {
        std::vector<double> re, im;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                re.push_back(k(i, j).real());
                im.push_back(k(i, j).imag());
            }
        ops.push_back(json{{"re", re}, {"im", im}});
    }
    return json{{"kind", "kraus"}, {"ops", ops}};
}

inline json to_json(const Channel& ch) {
    if (ch.pauli_form()) return to_json(*ch.pauli_form());
    return kraus_to_json(ch.kraus());
}

inline Channel channel_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pauli") {
        auto p = j.at("p").get<std::vector<double>>();
        if (p.size() != 4) throw Error("pauli channel needs 4 probabilities");
        return Channel::pauli(PauliChannel(Vec4(p[0], p[1], p[2], p[3])));
    }
    if (kind == "tmatrix") {
        auto m = j.at("m").get<std::vector<double>>();
        if (m.size() != 16) throw Error("tmatrix needs 16 row-major entries");
        RMat4 t;
        for (int i = 0; i < 4; ++i)
            for (int jj = 0; jj < 4; ++jj) t(i, jj) = m[4 * i + jj];
        return Channel::from_tmatrix(TMatrix(t));
    }
    if (kind == "kraus") {
        std::vector<Mat2> ops;
        for (const auto& op : j.at("ops")) {
            auto re = op.at("re").get<std::vector<double>>();
            auto im = op.at("im").get<std::vector<double>>();
            if (re.size() != 4 || im.size() != 4) throw Error("kraus op needs 4 re and 4 im");
            Mat2 k;
            for (int i = 0; i < 2; ++i)
                for (int jj = 0; jj < 2; ++jj) k(i, jj) = cd(re[2 * i + jj], im[2 * i + jj]);
            ops.push_back(k);
        }
        return Channel::from_kraus(std::move(ops));
    }
    throw Error("unknown channel kind: " + kind);
}

// ---------------------------------------------------------------------------
// Classification records.
// ---------------------------------------------------------------------------

inline const char* to_string(IbcVerdict v) {
    switch (v) {
        case IbcVerdict::breaking: return "breaking";
        case IbcVerdict::not_breaking: return "not-breaking";
        default: return "unknown";
    }
}

inline json to_json(const ChannelClassification& c) {
    json ibc = json::object();
    for (const auto& [n, verdict] : c.ibc_flags) ibc[std::to_string(n)] = to_string(verdict);
    json out{{"is_ebc", c.is_ebc},
             {"ibc_flags", ibc},
             {"is_coherence_breaking", c.is_coherence_breaking}};
    if (c.pauli_octahedron_margin) out["pauli_octahedron_margin"] = *c.pauli_octahedron_margin;
    return out;
}

inline json to_json(const SwitchUsefulness& u) {
    return json{{"useless_plain", u.useless_plain},
                {"useful_under_plus", u.useful_under_plus},
                {"useful_under_minus", u.useful_under_minus},
                {"completely_useless", u.completely_useless}};
}

inline json to_json(const DistanceStats& s) {
    return json{{"count", s.count}, {"mean", s.mean},           {"min", s.min},
                {"max", s.max},     {"bin_width", s.bin_width}, {"histogram", s.histogram}};
}

inline json to_json(const VennTallies& v) {
    return json{{"gated_pairs", v.gated}, {"useful_plus_only", v.plus_only},
                {"useful_minus_only", v.minus_only}, {"useful_both", v.both},
                {"useful_neither", v.neither}};
}

// ---------------------------------------------------------------------------
// Run manifest, embedded verbatim in every output file header.
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::int64_t wall_time_ms = 0;

    json to_json() const {
        return json{{"command", command},
                    {"config", config},
                    {"seed", seed},
                    {"tool_version", tool_version},
                    {"wall_time_ms", wall_time_ms}};
    }

    static RunManifest from_json(const json& j) {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
        return m;
    }
};

/// CSV layout: one '#'-prefixed manifest line, a header row, then data rows.
/// The manifest line is excluded from byte-for-byte payload comparisons
/// because it carries the wall time.
inline std::string csv_document(const RunManifest& manifest, const std::string& header,
                                const std::vector<std::string>& rows) {
    std::string out = "# manifest " + manifest.to_json().dump() + "\n";
    out += header + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

inline std::string csv_payload(const std::string& document) {
    auto pos = document.find('\n');
    if (pos == std::string::npos) return document;
    if (document.rfind("# manifest", 0) == 0) return document.substr(pos + 1);
    return document;
}

inline RunManifest csv_manifest(const std::string& document) {
    if (document.rfind("# manifest ", 0) != 0) throw Error("document has no manifest line");
    auto pos = document.find('\n');
    std::string line = document.substr(11, pos - 11);
    return RunManifest::from_json(json::parse(line));
}

}  // namespace switchlab
