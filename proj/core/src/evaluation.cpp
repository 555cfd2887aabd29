#include "solarcast/evaluation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace solarcast {

namespace {

bool counts(const ForecastRecord &r, bool exclude_fallback) {
	return r.valid && !(exclude_fallback && r.fallback);
}

} // namespace

std::optional<double> normalized_l1(std::span<const ForecastRecord> records, bool exclude_fallback) {
	double num = 0.0;
	double den = 0.0;
	for (const auto &r : records) {
		if (counts(r, exclude_fallback)) {
			num += std::abs(r.predicted - r.observed);
			den += std::abs(r.observed);
		}
	}
	if (!(den > 0.0)) {
		return std::nullopt;
	}
	return num / den;
}

std::optional<double> normalized_l2(std::span<const ForecastRecord> records, bool exclude_fallback) {
	double num = 0.0;
	double den = 0.0;
	for (const auto &r : records) {
		if (counts(r, exclude_fallback)) {
			const double e = r.predicted - r.observed;
			num += e * e;
			den += r.observed * r.observed;
		}
	}
	if (!(den > 0.0)) {
		return std::nullopt;
	}
	return std::sqrt(num) / std::sqrt(den);
}

std::string MethodScore::label() const {
	ForecastRecord r;
	r.method = method;
	r.learning_years = learning_years;
	return r.label();
}

EvalReport evaluate(std::span<const ForecastRecord> records, bool exclude_fallback) {
	std::map<std::pair<Method, int>, std::vector<ForecastRecord>> groups;
	for (const auto &r : records) {
		groups[{r.method, r.learning_years}].push_back(r);
	}
	EvalReport report;
	report.fallback_excluded = exclude_fallback;
	if (!records.empty()) {
		report.horizon_s = records.front().horizon_s;
	}
	for (const auto &[key, group] : groups) {
		MethodScore s;
		s.method = key.first;
		s.learning_years = key.second;
		s.n_records = group.size();
		for (const auto &r : group) {
			if (counts(r, exclude_fallback)) {
				++s.n_valid;
			}
			if (r.valid && r.fallback) {
				++s.n_fallback;
			}
		}
		s.nl1 = normalized_l1(group, exclude_fallback);
		s.nl2 = normalized_l2(group, exclude_fallback);
		report.entries.push_back(s);
	}
	return report;
}

std::vector<MethodScore> rank_methods(const EvalReport &report, Metric metric) {
	if (report.entries.size() < 2) {
		throw std::invalid_argument("ranking needs at least two methods");
	}
	std::vector<MethodScore> ranked = report.entries;
	std::stable_sort(ranked.begin(), ranked.end(), [metric](const MethodScore &a, const MethodScore &b) {
		const auto sa = a.score(metric);
		const auto sb = b.score(metric);
		if (sa.has_value() != sb.has_value()) {
			return sa.has_value();
		}
		if (sa && *sa != *sb) {
			return *sa < *sb;
		}
		if (a.method != b.method) {
			return a.method < b.method;
		}
		return a.learning_years < b.learning_years;
	});
	return ranked;
}

double relative_improvement(double a, double b) {
	if (!(b > 0.0)) {
		throw std::invalid_argument("reference score must be positive");
	}
	return 100.0 * (b - a) / b;
}

namespace {

std::string fmt_score(const std::optional<double> &v) {
	if (!v) {
		return "undef";
	}
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.4f", *v);
	return buf;
}

void pad(std::string &out, const std::string &cell, std::size_t width) {
	out.append(width > cell.size() ? width - cell.size() : 0, ' ');
	out += cell;
}

} // namespace

std::string format_table(const EvalReport &report) {
	std::string out;
	char head[160];
	std::snprintf(head, sizeof head, "target=%s horizon=%lld min step=%lld min test=%s..%s%s\n",
	              std::string(to_string(report.target)).c_str(), static_cast<long long>(report.horizon_s / 60),
	              static_cast<long long>(report.step_s / 60), format_iso8601(report.test_begin).c_str(),
	              format_iso8601(report.test_end).c_str(), report.fallback_excluded ? " (SP fallbacks excluded)" : "");
	out += head;

	std::vector<std::string> labels;
	std::size_t width = 8;
	for (const auto &e : report.entries) {
		labels.push_back(e.label());
		width = std::max(width, labels.back().size() + 2);
	}
	const std::size_t first = 8;
	out += std::string(first, ' ');
	for (const auto &l : labels) {
		pad(out, l, width);
	}
	out += '\n';
	auto row = [&](const char *name, auto get) {
		std::string line = name;
		line.append(first - line.size(), ' ');
		for (const auto &e : report.entries) {
			pad(line, get(e), width);
		}
		out += line + '\n';
	};
	row("nL1", [](const MethodScore &e) { return fmt_score(e.nl1); });
	row("nL2", [](const MethodScore &e) { return fmt_score(e.nl2); });
	row("valid", [](const MethodScore &e) { return std::to_string(e.n_valid); });
	row("fallbk", [](const MethodScore &e) { return std::to_string(e.n_fallback); });
	return out;
}

std::string report_to_csv(const EvalReport &report) {
	std::string out = "method,nl1,nl2,n_valid,n_fallback,n_records\n";
	char buf[64];
	auto num = [&](const std::optional<double> &v) -> std::string {
		if (!v) {
			return "";
		}
		std::snprintf(buf, sizeof buf, "%.17g", *v);
		return buf;
	};
	for (const auto &e : report.entries) {
		out += e.label() + ',' + num(e.nl1) + ',' + num(e.nl2) + ',' + std::to_string(e.n_valid) + ',' +
		       std::to_string(e.n_fallback) + ',' + std::to_string(e.n_records) + '\n';
	}
	return out;
}

std::string report_to_json(const EvalReport &report) {
	nlohmann::ordered_json j;
	j["target"] = std::string(to_string(report.target));
	j["horizon_s"] = report.horizon_s;
	j["step_s"] = report.step_s;
	j["test_begin"] = format_iso8601(report.test_begin);
	j["test_end"] = format_iso8601(report.test_end);
	j["fallback_excluded"] = report.fallback_excluded;
	j["methods"] = nlohmann::ordered_json::array();
	for (const auto &e : report.entries) {
		nlohmann::ordered_json m;
		m["method"] = e.label();
		m["nl1"] = e.nl1 ? nlohmann::ordered_json(*e.nl1) : nlohmann::ordered_json(nullptr);
		m["nl2"] = e.nl2 ? nlohmann::ordered_json(*e.nl2) : nlohmann::ordered_json(nullptr);
		m["n_valid"] = e.n_valid;
		m["n_fallback"] = e.n_fallback;
		m["n_records"] = e.n_records;
		j["methods"].push_back(m);
	}
	return j.dump(2) + "\n";
}

} // namespace solarcast
