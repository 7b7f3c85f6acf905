#include "ringswarm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ringswarm {

namespace {

const std::map<std::string, SystemKind> kSystemNames = {
    {"swarm", SystemKind::swarm},
    {"decoupled", SystemKind::decoupled},
    {"rose_eps", SystemKind::rose_eps},
    {"rose_singular", SystemKind::rose_singular},
    {"taylor_example", SystemKind::taylor_example},
};

std::string system_name(SystemKind k) {
    for (const auto& [name, kind] : kSystemNames)
        if (kind == k) return name;
    throw std::logic_error("unknown system kind");
}

VectorXd json_vector(const json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("scenario field '" + field + "' must be an array");
    VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw std::invalid_argument("scenario field '" + field + "' entry " + std::to_string(i) +
                                        " is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

// n pairs [[x, y], ...] flattened to a 2n vector
VectorXd json_pairs(const json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("scenario field '" + field + "' must be an array of pairs");
    VectorXd v(2 * j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != 2)
            throw std::invalid_argument("scenario field '" + field + "' entry " + std::to_string(i) +
                                        " is not an [x, y] pair");
        v[2 * i] = j[i][0].get<double>();
        v[2 * i + 1] = j[i][1].get<double>();
    }
    return v;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("scenario document must be a JSON object");
    Scenario sc;
    if (!doc.contains("system")) throw std::invalid_argument("scenario missing required field 'system'");
    auto it = kSystemNames.find(doc["system"].get<std::string>());
    if (it == kSystemNames.end())
        throw std::invalid_argument("scenario field 'system' has unknown value '" +
                                    doc["system"].get<std::string>() + "'");
    sc.system = it->second;

    if (doc.contains("n")) sc.n = doc["n"].get<int>();
    if (doc.contains("t_end")) sc.t_end = doc["t_end"].get<double>();
    if (doc.contains("dt_init")) sc.dt_init = doc["dt_init"].get<double>();
    if (doc.contains("abs_tol")) sc.abs_tol = doc["abs_tol"].get<double>();
    if (doc.contains("rel_tol")) sc.rel_tol = doc["rel_tol"].get<double>();
    if (doc.contains("rose_epsilon")) sc.rose_epsilon = doc["rose_epsilon"].get<double>();
    if (doc.contains("seed")) sc.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("monitors"))
        for (const auto& m : doc["monitors"]) sc.monitors.push_back(m.get<std::string>());

    bool is_swarm = sc.system == SystemKind::swarm;
    if (is_swarm) {
        if (doc.contains("angles")) {
            RingSpec spec;
            spec.angles = json_vector(doc["angles"], "angles");
            spec.n = static_cast<int>(spec.angles.size());
            if (doc.contains("center")) {
                VectorXd c = json_vector(doc["center"], "center");
                if (c.size() != 2) throw std::invalid_argument("scenario field 'center' must have 2 entries");
                spec.center = Vector2d(c[0], c[1]);
            }
            if (doc.contains("spin")) spec.spin = doc["spin"].get<int>();
            if (spec.spin != 1 && spec.spin != -1)
                throw std::invalid_argument("scenario field 'spin' must be +1 or -1");
            sc.ring = spec;
            if (sc.n == 0) sc.n = spec.n;
        }
        if (doc.contains("positions") || doc.contains("velocities")) {
            if (!doc.contains("positions") || !doc.contains("velocities"))
                throw std::invalid_argument("scenario fields 'positions' and 'velocities' must come together");
            VectorXd p = json_pairs(doc["positions"], "positions");
            VectorXd v = json_pairs(doc["velocities"], "velocities");
            if (p.size() != v.size())
                throw std::invalid_argument("scenario 'positions' and 'velocities' lengths differ");
            SwarmState st(static_cast<int>(p.size()) / 2);
            st.positions = p;
            st.velocities = v;
            sc.initial = st;
            if (sc.n == 0) sc.n = st.n;
            if (sc.n != st.n) throw std::invalid_argument("scenario field 'n' contradicts 'positions'");
        }
        if (!sc.ring && !sc.initial)
            throw std::invalid_argument("swarm scenario needs 'positions'/'velocities' or ring 'angles'");
    } else {
        // low-dimensional systems pack the state into 'positions' (flat array)
        if (doc.contains("positions")) sc.initial_lowdim = json_vector(doc["positions"], "positions");
        int want = sc.system == SystemKind::decoupled ? 4
                   : sc.system == SystemKind::taylor_example ? 3 : 2;
        if (!sc.initial_lowdim)
            throw std::invalid_argument("scenario for this system needs flat 'positions' of length " +
                                        std::to_string(want));
        if (sc.initial_lowdim->size() != want)
            throw std::invalid_argument("scenario 'positions' must have length " + std::to_string(want) +
                                        " for system '" + system_name(sc.system) + "'");
        sc.n = 1;
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario parse error in " + path + ": " + e.what());
    }
    return parse_scenario(doc);
}

json scenario_to_json(const Scenario& sc) {
    json doc;
    doc["system"] = system_name(sc.system);
    doc["n"] = sc.n;
    doc["t_end"] = sc.t_end;
    doc["dt_init"] = sc.dt_init;
    doc["abs_tol"] = sc.abs_tol;
    doc["rel_tol"] = sc.rel_tol;
    doc["seed"] = sc.seed;
    doc["monitors"] = sc.monitors;
    if (sc.system == SystemKind::rose_eps) doc["rose_epsilon"] = sc.rose_epsilon;
    if (sc.ring) {
        doc["angles"] = std::vector<double>(sc.ring->angles.begin(), sc.ring->angles.end());
        doc["center"] = {sc.ring->center.x(), sc.ring->center.y()};
        doc["spin"] = sc.ring->spin;
    }
    if (sc.initial) {
        json p = json::array(), v = json::array();
        for (int k = 0; k < sc.initial->n; ++k) {
            p.push_back({sc.initial->pos(k).x(), sc.initial->pos(k).y()});
            v.push_back({sc.initial->vel(k).x(), sc.initial->vel(k).y()});
        }
        doc["positions"] = p;
        doc["velocities"] = v;
    }
    if (sc.initial_lowdim)
        doc["positions"] = std::vector<double>(sc.initial_lowdim->begin(), sc.initial_lowdim->end());
    return doc;
}

std::uint64_t scenario_hash(const Scenario& sc) {
    // nlohmann::json objects serialize with sorted keys, so dump() is canonical
    std::string s = scenario_to_json(sc).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

void format_double(std::ostream& os, double v) {
    char buf[40];
    int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    os.write(buf, len);
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& state_names) {
    os << "t";
    for (const auto& s : state_names) os << ',' << s;
    for (const auto& [name, chan] : traj.monitors) os << ',' << name;
    os << '\n';
    for (size_t i = 0; i < traj.size(); ++i) {
        format_double(os, traj.times[i]);
        const VectorXd& st = traj.states[i];
        if (static_cast<size_t>(st.size()) != state_names.size())
            throw std::invalid_argument("write_csv: state/name length mismatch");
        for (int j = 0; j < st.size(); ++j) {
            os << ',';
            format_double(os, st[j]);
        }
        for (const auto& [name, chan] : traj.monitors) {
            os << ',';
            format_double(os, chan[i]);
        }
        os << '\n';
    }
}

void write_csv_file(const std::string& path, const Trajectory& traj,
                    const std::vector<std::string>& state_names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(out, traj, state_names);
}

void write_jsonl(std::ostream& os, const Trajectory& traj) {
    for (size_t i = 0; i < traj.size(); ++i) {
        json rec;
        rec["t"] = traj.times[i];
        rec["state"] = std::vector<double>(traj.states[i].begin(), traj.states[i].end());
        json mon = json::object();
        for (const auto& [name, chan] : traj.monitors) mon[name] = chan[i];
        rec["monitors"] = mon;
        os << rec.dump() << '\n';
    }
}

void write_jsonl_file(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_jsonl(out, traj);
}

std::vector<std::string> state_names_swarm(int n) {
    std::vector<std::string> names;
    for (int k = 1; k <= n; ++k) {
        names.push_back("x" + std::to_string(k));
        names.push_back("y" + std::to_string(k));
    }
    for (int k = 1; k <= n; ++k) {
        names.push_back("vx" + std::to_string(k));
        names.push_back("vy" + std::to_string(k));
    }
    return names;
}

std::vector<std::string> state_names_abuw(int n) {
    std::vector<std::string> names;
    const char* blocks[] = {"a", "b", "u", "w"};
    for (const char* blk : blocks)
        for (int k = 1; k <= n; ++k) names.push_back(std::string(blk) + std::to_string(k));
    return names;
}

std::vector<std::string> state_names_lowdim(SystemKind kind) {
    switch (kind) {
        case SystemKind::decoupled:
            return {"x", "y", "u", "v"};
        case SystemKind::taylor_example:
            return {"x", "y", "z"};
        case SystemKind::rose_eps:
        case SystemKind::rose_singular:
            return {"x", "y"};
        default:
            throw std::invalid_argument("state_names_lowdim: not a low-dimensional system");
    }
}

namespace {

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json eigs_to_json(const std::vector<Complex>& eigs) {
    json out = json::array();
    for (const auto& l : eigs) out.push_back({l.real(), l.imag()});
    return out;
}

}  // namespace

json spectral_report_to_json(const SpectralReport& r) {
    json doc;
    doc["eigenvalues"] = eigs_to_json(r.eigs);
    doc["char_poly"] = r.char_poly;
    doc["spectral_gap"] = r.gap;
    doc["degenerate"] = r.degenerate;
    if (!r.degenerate) {
        doc["omega"] = r.omega;
        doc["char_J1"] = r.char_J1;
        doc["char_J2"] = r.char_J2;
        doc["eigenvalues_J1"] = eigs_to_json(eigenvalues(r.J1));
        doc["eigenvalues_J2"] = eigs_to_json(eigenvalues(r.J2));
        doc["hurwitz_minors"] = r.hurwitz;
    } else {
        doc["char_Jdeg"] = r.char_Jdeg;
    }
    return doc;
}

json basis_to_json(const BasisPack& b) {
    json doc;
    doc["n"] = b.n;
    doc["V"] = matrix_to_json(b.V);
    doc["T"] = matrix_to_json(b.T);
    doc["Vbb"] = matrix_to_json(b.Vbb);
    doc["Tbb"] = matrix_to_json(b.Tbb);
    doc["X"] = std::vector<double>(b.X.begin(), b.X.end());
    doc["P"] = matrix_to_json(b.P);
    doc["Pinv"] = matrix_to_json(b.Pinv);
    return doc;
}

json manifest_to_json(const RunManifest& m) {
    json doc;
    doc["scenario_hash"] = m.scenario_hash;
    doc["tool_version"] = m.tool_version;
    doc["seed"] = m.seed;
    doc["wall_seconds"] = m.wall_seconds;
    doc["outputs"] = m.outputs;
    return doc;
}

}  // namespace ringswarm
