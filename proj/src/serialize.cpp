#include "moduli/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace moduli::serialize {

json to_json(const CMat& m) {
    json re = json::array();
    json im = json::array();
    for (const cx& v : m.data()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMat cmat_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 0 || cols < 0 ||
        re.size() != static_cast<size_t>(rows) * cols ||
        im.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("malformed matrix document: entry count mismatch");
    CMat m(rows, cols);
    for (size_t i = 0; i < m.data().size(); ++i)
        m.data()[i] = cx(re[i].get<double>(), im[i].get<double>());
    if (!all_finite(m)) throw std::invalid_argument("malformed matrix document: non-finite entries");
    return m;
}

json to_json(const orbit::OrbitCertificate& cert) {
    json terms = json::array();
    for (const orbit::OrbitTerm& t : cert.terms)
        terms.push_back(json{{"witness", to_json(t.witness)},
                             {"operand", to_json(t.operand)},
                             {"weight", t.weight}});
    return json{{"target", to_json(cert.target)},
                {"relation", cert.relation == orbit::Relation::Equality ? "equality" : "domination"},
                {"residual", cert.residual},
                {"terms", std::move(terms)}};
}

orbit::OrbitCertificate certificate_from_json(const json& j) {
    orbit::OrbitCertificate cert;
    cert.target = cmat_from_json(j.at("target"));
    const std::string rel = j.at("relation").get<std::string>();
    if (rel == "equality")
        cert.relation = orbit::Relation::Equality;
    else if (rel == "domination")
        cert.relation = orbit::Relation::Domination;
    else
        throw std::invalid_argument("malformed certificate document: unknown relation '" + rel + "'");
    cert.residual = j.at("residual").get<double>();
    for (const json& tj : j.at("terms")) {
        orbit::OrbitTerm t;
        t.witness = cmat_from_json(tj.at("witness"));
        t.operand = cmat_from_json(tj.at("operand"));
        t.weight = tj.at("weight").get<double>();
        cert.terms.push_back(std::move(t));
    }
    return cert;
}

json to_json(const counterex::CounterReport& rep) {
    json q = json::object();
    for (const auto& [name, value] : rep.quantities) q[name] = value;
    return json{{"name", rep.name},
                {"claim", rep.claim},
                {"quantities", std::move(q)},
                {"verdict", rep.confirmed ? "confirmed" : "failed"},
                {"details", rep.details}};
}

json to_json(const ineq::IneqReport& rep) {
    return json{{"name", rep.name},       {"p", rep.p},
                {"lhs", rep.lhs},         {"rhs", rep.rhs},
                {"constant", rep.constant}, {"ratio", rep.ratio},
                {"margin", rep.margin},   {"verdict", ineq::verdict_name(rep.verdict)},
                {"instance", rep.instance}};
}

json to_json(const ineq::ExploreSummary& s) {
    return json{{"p", s.p},
                {"trials", s.trials},
                {"ensemble", rng::ensemble_name(s.ensemble)},
                {"seed", s.seed},
                {"n", s.n},
                {"conjectured_constant", s.conjectured_constant},
                {"best_random_ratio", s.best_random_ratio},
                {"best_trial", s.best_trial},
                {"best_ratio", s.best_ratio},
                {"violation_found", s.violation_found},
                {"violation_excess", s.violation_excess},
                {"note", s.note}};
}

std::string write_text(const json& j) { return j.dump(); }

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace moduli::serialize
