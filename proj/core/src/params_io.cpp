#include "qem/params_io.hpp"

#include <istream>
#include <iterator>
#include <json.hpp>

#include "qem/error.hpp"

namespace qem {

namespace {

using nlohmann::json;

double required_number(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(0, "missing key '" + path + "'");
    if (!it->is_number()) throw parse_error(0, "key '" + path + "' must be a number");
    return it->get<double>();
}

double optional_number(const json& obj, const std::string& key, double fallback) {
    return obj.contains(key) ? required_number(obj, key, key) : fallback;
}

json to_json(const ModelParams& p) {
    json gp = json::object();
    for (WordClass w : all_word_classes) gp[std::string(to_string(w))] = p.gamma_prime[w];
    return json{{"nu", p.nu},       {"nu_prime", p.nu_prime}, {"gamma", p.gamma}, {"gamma_prime", gp},
                {"kappa", p.kappa}, {"g", p.g},               {"t1", p.t1},       {"t2", p.t2}};
}

}  // namespace

ModelParams parse_params(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw parse_error(0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error(0, "parameters file must hold a JSON object");

    ModelParams p;
    p.nu = required_number(doc, "nu", "nu");
    p.nu_prime = required_number(doc, "nu_prime", "nu_prime");
    p.gamma = required_number(doc, "gamma", "gamma");
    const auto gp = doc.find("gamma_prime");
    if (gp == doc.end()) throw parse_error(0, "missing key 'gamma_prime'");
    if (!gp->is_object()) throw parse_error(0, "key 'gamma_prime' must be an object keyed by word class");
    for (WordClass w : all_word_classes) {
        const std::string name(to_string(w));
        p.gamma_prime[w] = required_number(*gp, name, "gamma_prime." + name);
    }
    p.kappa = required_number(doc, "kappa", "kappa");
    p.g = optional_number(doc, "g", p.g);
    p.t1 = optional_number(doc, "t1", p.t1);
    p.t2 = optional_number(doc, "t2", p.t2);
    p.validate();
    return p;
}

ModelParams load_params(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_params(text);
}

std::string params_to_json(const ModelParams& p) { return to_json(p).dump(2); }

std::string fit_result_to_json(const FitResult& r) {
    const json doc{{"params", to_json(r.params)}, {"rmse", r.rmse}, {"evaluations", r.evaluations}};
    return doc.dump(2);
}

}  // namespace qem
