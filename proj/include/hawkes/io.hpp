#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/core.hpp"
#include "hawkes/fit.hpp"

namespace hawkes::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CSV primitives. Quoted fields may contain commas and doubled quotes;
// newlines inside fields are not supported (communication logs have none).

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

/// Shortest exact decimal for a double; round-trips bit-for-bit.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next row into `fields`; returns false at end of input.
    /// Lines starting with '#' are skipped (layout comments).
    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line.front() == '#') continue;
            parse_line(line, fields);
            return true;
        }
        return false;
    }

    std::size_t line() const { return line_; }

private:
    static void parse_line(const std::string& line, std::vector<std::string>& fields) {
        fields.clear();
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (quoted) {
                if (ch == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cur += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    cur += ch;
                }
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        fields.push_back(std::move(cur));
    }

    std::istream& in_;
    std::size_t line_ = 0;
};

// ---------------------------------------------------------------------------
// Newline-delimited JSON for event series and fitted models.

inline json series_to_json(const EventSeries& s) {
    json j;
    j["schema"] = "series.v1";
    j["sender"] = s.sender;
    j["receiver"] = s.receiver;
    j["times"] = s.times;
    j["observation_end"] = s.observation_end;
    if (s.start_epoch >= 0) j["start_epoch"] = s.start_epoch;
    if (s.truncated) j["truncated"] = true;
    return j;
}

inline EventSeries series_from_json(const json& j) {
    EventSeries s;
    s.sender = j.value("sender", "");
    s.receiver = j.value("receiver", "");
    s.times = j.at("times").get<std::vector<double>>();
    s.observation_end = j.at("observation_end").get<double>();
    s.start_epoch = j.value("start_epoch", std::int64_t{-1});
    s.truncated = j.value("truncated", false);
    s.validate();
    return s;
}

inline void write_series_ndjson(std::ostream& os, std::span<const EventSeries> series) {
    for (const auto& s : series) os << series_to_json(s).dump() << '\n';
}

inline std::vector<EventSeries> read_series_ndjson(std::istream& in) {
    std::vector<EventSeries> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(series_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error("series input line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return out;
}

/// One fitted dyad as persisted by the fit pipeline.
struct FitRecord {
    std::string sender;
    std::string receiver;
    FittedModel model;
};

inline json fit_record_to_json(const FitRecord& r) {
    json j;
    j["schema"] = "fit.v1";
    j["sender"] = r.sender;
    j["receiver"] = r.receiver;
    j["family"] = to_string(r.model.params.family);
    j["kappa"] = r.model.params.kappa;
    j["theta"] = r.model.params.theta;
    if (r.model.params.family == KernelFamily::PowerLaw) j["c"] = r.model.params.c;
    j["nll"] = r.model.nll;
    j["n_star"] = r.model.n_star;
    j["converged"] = r.model.converged;
    j["n_events"] = r.model.n_events;
    j["train_window"] = {0.0, r.model.train_window_end};
    return j;
}

inline FitRecord fit_record_from_json(const json& j) {
    FitRecord r;
    r.sender = j.value("sender", "");
    r.receiver = j.value("receiver", "");
    r.model.params.family = kernel_family_from_string(j.at("family").get<std::string>());
    r.model.params.kappa = j.at("kappa").get<double>();
    r.model.params.theta = j.at("theta").get<double>();
    if (r.model.params.family == KernelFamily::PowerLaw)
        r.model.params.c = j.at("c").get<double>();
    r.model.nll = j.at("nll").get<double>();
    r.model.n_star = j.at("n_star").get<double>();
    r.model.converged = j.at("converged").get<bool>();
    r.model.n_events = j.at("n_events").get<std::size_t>();
    if (j.contains("train_window")) r.model.train_window_end = j["train_window"].at(1).get<double>();
    return r;
}

inline void write_fit_records_ndjson(std::ostream& os, std::span<const FitRecord> records) {
    for (const auto& r : records) os << fit_record_to_json(r).dump() << '\n';
}

inline std::vector<FitRecord> read_fit_records_ndjson(std::istream& in) {
    std::vector<FitRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(fit_record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error("model input line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return out;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

}  // namespace hawkes::io
