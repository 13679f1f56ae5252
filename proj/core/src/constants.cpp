#include "thinfilm/constants.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace thinfilm {

double lambda_c() { return std::numbers::pi / 2.0; }

double Constants::lambda_minus(double eps) const {
    return lambda_c() * (1.0 - std::abs(std::log(beta1)) / std::abs(std::log(eps)));
}

double Constants::lambda_plus(double eps) const {
    return lambda_c() * (1.0 + std::abs(std::log(beta2)) / std::abs(std::log(eps)));
}

std::string Constants::to_json_text() const {
    nlohmann::json j = {
        {"c_hat", c_hat},
        {"c_star", c_star},
        {"beta1", beta1},
        {"beta2", beta2},
        {"K_hat", K_hat},
        {"delta_hat", delta_hat},
        {"coef_321", coef_321},
        {"c_wallcount", c_wallcount},
        {"provenance", provenance},
    };
    return j.dump(2);
}

Constants Constants::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Constants c;
    c.c_hat = j.value("c_hat", c.c_hat);
    c.c_star = j.value("c_star", c.c_star);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.K_hat = j.value("K_hat", c.K_hat);
    c.delta_hat = j.value("delta_hat", c.delta_hat);
    c.coef_321 = j.value("coef_321", c.coef_321);
    c.c_wallcount = j.value("c_wallcount", c.c_wallcount);
    c.provenance = j.value("provenance", c.provenance);
    return c;
}

Constants Constants::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Constants::load: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void Constants::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("Constants::save: cannot open " + path);
    out << to_json_text() << "\n";
}

Constants Constants::resolve() {
    if (const char* env = std::getenv("THINFILM_CONSTANTS")) return load(env);
    return Constants{};
}

}  // namespace thinfilm
