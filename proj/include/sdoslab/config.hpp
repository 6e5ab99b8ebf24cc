#pragma once
// Experiment configuration: JSON ingestion with eager schema validation.
// Unknown keys are reported by their full path and carry exit status 2.

#include <json.hpp>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdoslab/chebyshev.hpp"
#include "sdoslab/funcalc.hpp"
#include "sdoslab/hamiltonian.hpp"
#include "sdoslab/potential.hpp"
#include "sdoslab/test_function.hpp"

namespace sdoslab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    sweep_L,
    sweep_Lp,
    sweep_h,
    bohr,
    decay_scan,
    oracle_compare,
    fourier_diagnostics
};

struct BohrConfig {
    std::vector<DVec> gammas;
    std::vector<int> L_list;
};

struct DecayConfig {
    IVec y1;
    int y2_min = 2;
    int y2_max = 10;
    bool stability_check = false;
};

struct FourierConfig {
    double theta_width = 1.0;
    std::vector<double> h_list;
    DVec xi{0.0};
    int certificate_exponent = 4;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sweep_Lp;
    LatticeSpec lattice;
    std::vector<double> h_list;  // sweep-h
    double L = 4.0, Lp = 4.0;
    std::vector<double> L_list, Lp_list;
    int buffer = 6;
    Bc bc = Bc::dirichlet;
    APPotential potential;
    TestFunction f;
    Method method = Method::dense;
    int degree = 2048;
    Damping damping = Damping::none;
    int quadrature_order = 64;
    BohrConfig bohr;
    DecayConfig decay;
    FourierConfig fourier;
    std::string output_dir = "out";
};

namespace cfg_detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown config key: " + path + "." + it.key());
}

template <class T>
T require(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing config key: " + path + "." + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value type at " + path + "." + key);
    }
}

template <class T>
T get_or(const json& j, const std::string& path, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value type at " + path + "." + key);
    }
}

inline Profile parse_profile(const json& j, const std::string& path, int d2) {
    check_keys(j, path,
               {"kind", "amp", "center", "width", "degree", "values", "box", "delta0",
                "smooth"});
    Profile p;
    p.d2 = d2;
    const auto amp = require<std::vector<double>>(j, path, "amp");
    if (amp.size() != 2) throw ConfigError(path + ".amp: expected [re, im]");
    p.amp = {amp[0], amp[1]};
    const auto kind = require<std::string>(j, path, "kind");
    if (kind == "bump") {
        p.kind = Profile::Kind::bump;
        p.center = require<DVec>(j, path, "center");
        if (static_cast<int>(p.center.size()) != d2)
            throw ConfigError(path + ".center: length must equal d2");
        p.width = require<double>(j, path, "width");
        if (!(p.width > 0.0)) throw ConfigError(path + ".width: must be > 0");
    } else if (kind == "algebraic") {
        p.kind = Profile::Kind::algebraic;
        p.delta0 = require<double>(j, path, "delta0");
        p.smooth = get_or<bool>(j, path, "smooth", true);
        if (!(p.delta0 > 0.0)) throw ConfigError(path + ".delta0: must be > 0");
    } else if (kind == "bernstein") {
        p.kind = Profile::Kind::bernstein;
        p.degree = require<int>(j, path, "degree");
        p.values = require<std::vector<double>>(j, path, "values");
        const auto box = require<std::vector<DVec>>(j, path, "box");
        if (box.size() != 2 || static_cast<int>(box[0].size()) != d2 ||
            static_cast<int>(box[1].size()) != d2)
            throw ConfigError(path + ".box: expected [[lo...],[hi...]] of length d2");
        p.blo = box[0];
        p.bhi = box[1];
        std::size_t expect = 1;
        for (int k = 0; k < d2; ++k) expect *= static_cast<std::size_t>(p.degree + 1);
        if (p.values.size() != expect)
            throw ConfigError(path + ".values: expected (degree+1)^d2 entries");
    } else {
        throw ConfigError(path + ".kind: unknown profile kind '" + kind + "'");
    }
    return p;
}

inline TestFunction parse_test_function(const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "mu", "sigma", "support", "shoulder", "plateau",
                         "coeffs"});
    const auto kind = require<std::string>(j, path, "kind");
    const auto sup = require<std::vector<double>>(j, path, "support");
    if (sup.size() != 2) throw ConfigError(path + ".support: expected [a, b]");
    if (kind == "gaussian-bump")
        return TestFunction::gaussian(require<double>(j, path, "mu"),
                                      require<double>(j, path, "sigma"), sup[0], sup[1],
                                      get_or<double>(j, path, "shoulder", 1.0));
    if (kind == "plateau-bump") {
        const auto pl = require<std::vector<double>>(j, path, "plateau");
        if (pl.size() != 2) throw ConfigError(path + ".plateau: expected [p, q]");
        return TestFunction::plateau(sup[0], pl[0], pl[1], sup[1]);
    }
    if (kind == "polynomial-bump")
        return TestFunction::polynomial(require<std::vector<double>>(j, path, "coeffs"),
                                        sup[0], sup[1]);
    throw ConfigError(path + ".kind: unknown test function kind '" + kind + "'");
}

}  // namespace cfg_detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using namespace cfg_detail;
    using nlohmann::json;
    ExperimentConfig c;
    check_keys(j, "$",
               {"kind", "lattice", "box", "bc", "potential", "test_function", "method",
                "quadrature_order", "bohr", "decay", "fourier", "output_dir"});

    const auto kind = require<std::string>(j, "$", "kind");
    if (kind == "sweep-L") c.kind = ExperimentKind::sweep_L;
    else if (kind == "sweep-Lp") c.kind = ExperimentKind::sweep_Lp;
    else if (kind == "sweep-h") c.kind = ExperimentKind::sweep_h;
    else if (kind == "bohr") c.kind = ExperimentKind::bohr;
    else if (kind == "decay-scan") c.kind = ExperimentKind::decay_scan;
    else if (kind == "oracle-compare") c.kind = ExperimentKind::oracle_compare;
    else if (kind == "fourier-diagnostics") c.kind = ExperimentKind::fourier_diagnostics;
    else throw ConfigError("$.kind: unknown experiment kind '" + kind + "'");

    const json& lat = j.contains("lattice") ? j.at("lattice") : json::object();
    check_keys(lat, "$.lattice", {"d1", "d2", "h", "h_list"});
    c.lattice.d1 = get_or<int>(lat, "$.lattice", "d1", 1);
    c.lattice.d2 = get_or<int>(lat, "$.lattice", "d2", 1);
    c.lattice.h = get_or<double>(lat, "$.lattice", "h", 1.0);
    c.h_list = get_or<std::vector<double>>(lat, "$.lattice", "h_list", {});
    c.lattice.validate();
    if (c.kind == ExperimentKind::sweep_h && c.h_list.empty())
        throw ConfigError("$.lattice.h_list: required (nonempty) for sweep-h");

    const json& box = j.contains("box") ? j.at("box") : json::object();
    check_keys(box, "$.box", {"L", "Lp", "L_list", "Lp_list", "buffer"});
    c.L = get_or<double>(box, "$.box", "L", 4.0);
    c.Lp = get_or<double>(box, "$.box", "Lp", 4.0);
    c.L_list = get_or<std::vector<double>>(box, "$.box", "L_list", {});
    c.Lp_list = get_or<std::vector<double>>(box, "$.box", "Lp_list", {});
    c.buffer = get_or<int>(box, "$.box", "buffer", 6);
    if (c.buffer < 0) throw ConfigError("$.box.buffer: must be >= 0");
    if (c.kind == ExperimentKind::sweep_L && c.L_list.empty())
        throw ConfigError("$.box.L_list: required (nonempty) for sweep-L");
    if (c.kind == ExperimentKind::sweep_Lp && c.Lp_list.empty())
        throw ConfigError("$.box.Lp_list: required (nonempty) for sweep-Lp");

    const auto bc = get_or<std::string>(j, "$", "bc", "dirichlet");
    if (bc == "dirichlet") c.bc = Bc::dirichlet;
    else if (bc == "periodic-x1") c.bc = Bc::periodic_x1;
    else if (bc == "periodic-all") c.bc = Bc::periodic_all;
    else throw ConfigError("$.bc: unknown boundary condition '" + bc + "'");

    // Potential: optional for the pure fourier/bohr kinds; zero when absent.
    c.potential.d1 = c.lattice.d1;
    c.potential.d2 = c.lattice.d2;
    if (j.contains("potential")) {
        const json& pot = j.at("potential");
        check_keys(pot, "$.potential", {"C", "delta0", "modes"});
        c.potential.C = get_or<double>(pot, "$.potential", "C", 1.0);
        c.potential.delta0 = get_or<double>(pot, "$.potential", "delta0", 1.0);
        if (pot.contains("modes")) {
            const json& modes = pot.at("modes");
            if (!modes.is_array()) throw ConfigError("$.potential.modes: expected array");
            int mi = 0;
            for (const auto& m : modes) {
                const std::string mpath = "$.potential.modes[" + std::to_string(mi) + "]";
                check_keys(m, mpath, {"gamma", "profile"});
                Mode mode;
                mode.gamma = require<DVec>(m, mpath, "gamma");
                if (static_cast<int>(mode.gamma.size()) != c.lattice.d1)
                    throw ConfigError(mpath + ".gamma: length must equal d1");
                mode.profile =
                    parse_profile(m.at("profile"), mpath + ".profile", c.lattice.d2);
                c.potential.modes.push_back(std::move(mode));
                ++mi;
            }
        }
        c.potential.validate();
    }

    if (j.contains("test_function"))
        c.f = parse_test_function(j.at("test_function"), "$.test_function");
    else
        c.f = TestFunction::gaussian(2.0, 1.5, -2.5, 9.0, 1.0);

    if (j.contains("method")) {
        const json& m = j.at("method");
        check_keys(m, "$.method", {"kind", "degree", "damping"});
        const auto mk = get_or<std::string>(m, "$.method", "kind", "dense");
        if (mk == "dense") c.method = Method::dense;
        else if (mk == "kpm") c.method = Method::kpm;
        else throw ConfigError("$.method.kind: unknown method '" + mk + "'");
        c.degree = get_or<int>(m, "$.method", "degree", 2048);
        const auto dm = get_or<std::string>(m, "$.method", "damping", "none");
        if (dm == "none") c.damping = Damping::none;
        else if (dm == "jackson") c.damping = Damping::jackson;
        else throw ConfigError("$.method.damping: unknown damping '" + dm + "'");
    }

    c.quadrature_order = get_or<int>(j, "$", "quadrature_order", 64);
    if (c.quadrature_order < 16) throw ConfigError("$.quadrature_order: must be >= 16");

    if (j.contains("bohr")) {
        const json& b = j.at("bohr");
        check_keys(b, "$.bohr", {"gammas", "L_list"});
        c.bohr.gammas = require<std::vector<DVec>>(b, "$.bohr", "gammas");
        c.bohr.L_list = require<std::vector<int>>(b, "$.bohr", "L_list");
    } else if (c.kind == ExperimentKind::bohr) {
        throw ConfigError("missing config key: $.bohr");
    }

    if (j.contains("decay")) {
        const json& d = j.at("decay");
        check_keys(d, "$.decay", {"y1", "y2_min", "y2_max", "stability_check"});
        c.decay.y1 = require<IVec>(d, "$.decay", "y1");
        c.decay.y2_min = require<int>(d, "$.decay", "y2_min");
        c.decay.y2_max = require<int>(d, "$.decay", "y2_max");
        c.decay.stability_check = get_or<bool>(d, "$.decay", "stability_check", false);
    } else if (c.kind == ExperimentKind::decay_scan) {
        throw ConfigError("missing config key: $.decay");
    }

    if (j.contains("fourier")) {
        const json& f = j.at("fourier");
        check_keys(f, "$.fourier", {"theta_width", "h_list", "xi", "certificate_exponent"});
        c.fourier.theta_width = get_or<double>(f, "$.fourier", "theta_width", 1.0);
        c.fourier.h_list = require<std::vector<double>>(f, "$.fourier", "h_list");
        c.fourier.xi = get_or<DVec>(f, "$.fourier", "xi", DVec{0.0});
        c.fourier.certificate_exponent =
            get_or<int>(f, "$.fourier", "certificate_exponent", 4);
    } else if (c.kind == ExperimentKind::fourier_diagnostics) {
        throw ConfigError("missing config key: $.fourier");
    }

    c.output_dir = get_or<std::string>(j, "$", "output_dir", "out");
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace sdoslab
