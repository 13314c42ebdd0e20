#include "copmarkov/report.hpp"

#include "copmarkov/error.hpp"

#include <json.hpp>

namespace copmarkov {

std::string to_string(Method method)
{
    switch (method) {
    case Method::Moment: return "moment";
    case Method::Mle: return "mle";
    case Method::RobustEmpirical: return "robust_empirical";
    case Method::RobustModel: return "robust_model";
    }
    return "unknown";
}

Method parse_method(std::string_view name)
{
    for (Method m : {Method::Moment, Method::Mle, Method::RobustEmpirical, Method::RobustModel}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown method '" + std::string(name) +
                                           "' (expected moment, mle, robust_empirical or robust_model)");
}

std::string to_json(const EstimateReport& report, int indent)
{
    nlohmann::ordered_json doc;
    doc["method"] = to_string(report.method);
    if (report.family) {
        doc["family"] = to_string(*report.family);
    }
    doc["parameters"] = report.parameter_names;
    doc["estimates"] = std::vector<double>(report.estimates.data(), report.estimates.data() + report.estimates.size());
    std::vector<double> sigma;
    sigma.reserve(static_cast<std::size_t>(report.sigma.size()));
    for (Eigen::Index i = 0; i < report.sigma.rows(); ++i) {
        for (Eigen::Index j = 0; j < report.sigma.cols(); ++j) {
            sigma.push_back(report.sigma(i, j));
        }
    }
    doc["sigma"] = sigma;
    doc["sigma_dim"] = report.sigma.rows();
    auto intervals = nlohmann::ordered_json::array();
    for (const auto& iv : report.intervals) {
        intervals.push_back({iv.lower, iv.upper});
    }
    doc["intervals"] = intervals;
    doc["alpha"] = report.alpha;
    doc["n"] = report.n;
    if (!report.bandwidths.empty()) {
        doc["bandwidths"] = report.bandwidths;
    }
    if (report.method == Method::Mle) {
        doc["at_boundary"] = report.at_boundary;
    }
    return doc.dump(indent);
}

EstimateReport report_from_json(std::string_view text)
{
    try {
        const auto doc = nlohmann::json::parse(text);
        EstimateReport report;
        report.method = parse_method(doc.at("method").get<std::string>());
        if (doc.contains("family")) {
            report.family = parse_family(doc.at("family").get<std::string>());
        }
        report.parameter_names = doc.value("parameters", std::vector<std::string>{});
        const auto estimates = doc.at("estimates").get<std::vector<double>>();
        report.estimates = Eigen::Map<const Vector>(estimates.data(), static_cast<Eigen::Index>(estimates.size()));
        const auto sigma = doc.at("sigma").get<std::vector<double>>();
        const auto dim = doc.at("sigma_dim").get<Eigen::Index>();
        if (dim * dim != static_cast<Eigen::Index>(sigma.size())) {
            throw Error(ErrorCode::ParseError, "sigma has " + std::to_string(sigma.size()) + " entries, expected " +
                                                   std::to_string(dim * dim));
        }
        report.sigma = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            sigma.data(), dim, dim);
        for (const auto& iv : doc.at("intervals")) {
            report.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
        }
        report.alpha = doc.at("alpha").get<double>();
        report.n = doc.at("n").get<Eigen::Index>();
        report.bandwidths = doc.value("bandwidths", std::vector<double>{});
        report.at_boundary = doc.value("at_boundary", false);
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("estimate report: ") + e.what());
    }
}

}  // namespace copmarkov
