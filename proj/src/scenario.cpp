#include "toa/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace toa {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, RawEntry>;

struct RawDoc {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
};

const std::set<std::string> kKnownSections = {"packet", "potential", "detectors",
                                              "grid", "sweep", "quadrature", "output"};

class Collector {
  public:
    explicit Collector(std::vector<std::string>& errors) : errors_(errors) {}
    void add(int line, const std::string& message) {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << message;
        errors_.push_back(os.str());
    }

  private:
    std::vector<std::string>& errors_;
};

bool parse_number(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_int(const std::string& s, int& out) {
    double v = 0.0;
    if (!parse_number(s, v)) return false;
    if (v != std::floor(v) || std::abs(v) > 1e9) return false;
    out = static_cast<int>(v);
    return true;
}

class SectionReader {
  public:
    SectionReader(RawDoc& doc, const std::string& name, Collector& errors)
        : errors_(errors), name_(name) {
        auto it = doc.sections.find(name);
        section_ = (it != doc.sections.end()) ? &it->second : nullptr;
    }

    bool present() const { return section_ != nullptr; }

    std::optional<double> number(const std::string& key, bool required = true) {
        const RawEntry* e = fetch(key, required);
        if (e == nullptr) return std::nullopt;
        double v = 0.0;
        if (!parse_number(e->value, v)) {
            errors_.add(e->line, "[" + name_ + "] " + key + ": not a number: '" + e->value + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<int> integer(const std::string& key, bool required = true) {
        const RawEntry* e = fetch(key, required);
        if (e == nullptr) return std::nullopt;
        int v = 0;
        if (!parse_int(e->value, v)) {
            errors_.add(e->line, "[" + name_ + "] " + key + ": not an integer: '" + e->value + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::string> text(const std::string& key, bool required = true) {
        const RawEntry* e = fetch(key, required);
        if (e == nullptr) return std::nullopt;
        return e->value;
    }

    int line(const std::string& key) const {
        if (section_ == nullptr) return 0;
        auto it = section_->find(key);
        return it == section_->end() ? 0 : it->second.line;
    }

    void finish() {
        if (section_ == nullptr) return;
        for (const auto& [key, entry] : *section_)
            if (!entry.used) errors_.add(entry.line, "[" + name_ + "] unknown key '" + key + "'");
    }

  private:
    const RawEntry* fetch(const std::string& key, bool required) {
        if (section_ == nullptr) return nullptr;
        auto it = section_->find(key);
        if (it == section_->end()) {
            if (required) errors_.add(0, "[" + name_ + "] missing required key '" + key + "'");
            return nullptr;
        }
        it->second.used = true;
        return &it->second;
    }

    Collector& errors_;
    std::string name_;
    Section* section_;
};

RawDoc tokenize(const std::string& text, Collector& errors) {
    RawDoc doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.add(lineno, "malformed section header '" + line + "'");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (kKnownSections.count(section) == 0)
                errors.add(lineno, "unknown section '[" + section + "]'");
            doc.section_lines.emplace(section, lineno);
            doc.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.add(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }
        if (section.empty()) {
            errors.add(lineno, "key outside of any [section]");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto [it, inserted] = doc.sections[section].emplace(key, RawEntry{value, lineno, false});
        if (!inserted) errors.add(lineno, "duplicate key '" + key + "' in [" + section + "]");
    }
    return doc;
}

void parse_potential(RawDoc& doc, Collector& errors, ScenarioConfig& cfg) {
    SectionReader pot(doc, "potential", errors);
    auto kind = pot.text("kind");
    if (!kind) {
        pot.finish();
        return;
    }
    const double mass = cfg.mass;
    auto height_from = [&](SectionReader& r) -> std::optional<double> {
        auto pV = r.number("pV", false);
        auto V = r.number("V", false);
        if (pV && V) {
            errors.add(r.line("V"), "[potential] give either pV or V, not both");
            return std::nullopt;
        }
        if (pV) {
            if (*pV < 0.0) {
                errors.add(r.line("pV"), "[potential] pV must be >= 0");
                return std::nullopt;
            }
            return 0.5 * (*pV) * (*pV) / mass;
        }
        if (V) {
            if (*V < 0.0) {
                errors.add(r.line("V"), "[potential] V must be >= 0");
                return std::nullopt;
            }
            return *V;
        }
        errors.add(0, "[potential] missing required key 'pV' (or 'V')");
        return std::nullopt;
    };
    try {
        if (*kind == "free") {
            cfg.potential = PotentialSpec::free();
        } else if (*kind == "step") {
            if (auto h = height_from(pot)) cfg.potential = PotentialSpec::step(*h);
        } else if (*kind == "square_barrier") {
            auto h = height_from(pot);
            auto a = pot.number("a");
            if (h && a) cfg.potential = PotentialSpec::square_barrier(*h, *a);
        } else if (*kind == "linear_ramp") {
            if (auto f = pot.number("f")) cfg.potential = PotentialSpec::linear_ramp(*f);
        } else if (*kind == "sampled_smooth") {
            auto points = pot.text("points");
            if (points) {
                std::vector<std::pair<double, double>> table;
                std::istringstream ps(*points);
                std::string tok;
                bool bad = false;
                while (ps >> tok) {
                    const auto colon = tok.find(':');
                    double q = 0.0, v = 0.0;
                    if (colon == std::string::npos ||
                        !parse_number(tok.substr(0, colon), q) ||
                        !parse_number(tok.substr(colon + 1), v)) {
                        bad = true;
                        break;
                    }
                    table.emplace_back(q, v);
                }
                if (bad)
                    errors.add(pot.line("points"),
                               "[potential] points must be 'q:V q:V ...' pairs");
                else
                    cfg.potential = PotentialSpec::sampled(std::move(table));
            }
        } else {
            errors.add(pot.line("kind"), "[potential] unknown kind '" + *kind + "'");
        }
    } catch (const domain_error& e) {
        errors.add(doc.section_lines.count("potential") ? doc.section_lines["potential"] : 0,
                   std::string("[potential] ") + e.what());
    }
    pot.finish();
}

}  // namespace

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
    auto grid_eq = [](const std::optional<TimeGrid>& a, const std::optional<TimeGrid>& b) {
        if (a.has_value() != b.has_value()) return false;
        if (!a) return true;
        return a->t_min == b->t_min && a->t_max == b->t_max && a->n_points == b->n_points;
    };
    auto pot_eq = [](const PotentialSpec& a, const PotentialSpec& b) {
        if (a.kind_name() != b.kind_name()) return false;
        if (const Step* s = a.get_if<Step>()) return s->height == b.get_if<Step>()->height;
        if (const SquareBarrier* s = a.get_if<SquareBarrier>()) {
            const SquareBarrier* t = b.get_if<SquareBarrier>();
            return s->height == t->height && s->width == t->width;
        }
        if (const LinearRamp* s = a.get_if<LinearRamp>())
            return s->force == b.get_if<LinearRamp>()->force;
        if (const SampledSmooth* s = a.get_if<SampledSmooth>())
            return s->table == b.get_if<SampledSmooth>()->table;
        return true;
    };
    return q0 == o.q0 && p0 == o.p0 && delta == o.delta && mass == o.mass &&
           pot_eq(potential, o.potential) && detectors == o.detectors &&
           grid_eq(grid, o.grid) && sweep == o.sweep && rel_tol == o.rel_tol &&
           allow_poor_quality == o.allow_poor_quality && prefix == o.prefix;
}

ScenarioParse parse_scenario(const std::string& text) {
    ScenarioParse out;
    Collector errors(out.errors);
    RawDoc doc = tokenize(text, errors);

    for (const char* required : {"packet", "potential", "detectors"})
        if (doc.sections.count(required) == 0)
            errors.add(0, std::string("missing required section [") + required + "]");
    if (!out.errors.empty() && doc.sections.empty()) return out;

    ScenarioConfig cfg;

    SectionReader packet(doc, "packet", errors);
    if (packet.present()) {
        auto q0 = packet.number("q0");
        auto p0 = packet.number("p0");
        auto delta = packet.number("delta");
        auto mass = packet.number("mass");
        if (q0) cfg.q0 = *q0;
        if (p0) cfg.p0 = *p0;
        if (delta) cfg.delta = *delta;
        if (mass) cfg.mass = *mass;
        if (p0 && !(*p0 > 0.0)) errors.add(packet.line("p0"), "[packet] p0 must be > 0");
        if (delta && !(*delta > 0.0))
            errors.add(packet.line("delta"), "[packet] delta must be > 0");
        if (mass && !(*mass > 0.0)) errors.add(packet.line("mass"), "[packet] mass must be > 0");
        packet.finish();
    }

    if (doc.sections.count("potential") != 0) parse_potential(doc, errors, cfg);

    SectionReader det(doc, "detectors", errors);
    if (det.present()) {
        if (auto positions = det.text("positions")) {
            std::istringstream ps(*positions);
            std::string tok;
            while (ps >> tok) {
                double x = 0.0;
                if (!parse_number(tok, x)) {
                    errors.add(det.line("positions"),
                               "[detectors] positions must be numbers, got '" + tok + "'");
                    break;
                }
                cfg.detectors.push_back(x);
            }
            if (cfg.detectors.empty())
                errors.add(det.line("positions"), "[detectors] needs at least one position");
        }
        det.finish();
    }

    SectionReader grid(doc, "grid", errors);
    if (grid.present()) {
        auto mode = grid.text("mode");
        if (mode && *mode == "explicit") {
            auto tmin = grid.number("t_min");
            auto tmax = grid.number("t_max");
            auto n = grid.integer("n");
            if (tmin && tmax && n) {
                if (*tmin < *tmax && *n >= 16)
                    cfg.grid = TimeGrid(*tmin, *tmax, *n);
                else
                    errors.add(grid.line("t_min"),
                               "[grid] need t_min < t_max and n >= 16");
            }
        } else if (mode && *mode != "auto") {
            errors.add(grid.line("mode"), "[grid] mode must be auto or explicit");
        }
        grid.finish();
    }

    SectionReader sweep(doc, "sweep", errors);
    if (sweep.present()) {
        SweepSpec sp;
        auto parameter = sweep.text("parameter");
        auto lo = sweep.number("min");
        auto hi = sweep.number("max");
        auto count = sweep.integer("count");
        if (parameter && *parameter != "pV" && *parameter != "a")
            errors.add(sweep.line("parameter"), "[sweep] parameter must be pV or a");
        if (parameter && lo && hi && count) {
            sp.parameter = *parameter;
            sp.lo = *lo;
            sp.hi = *hi;
            sp.count = *count;
            if (!(sp.lo < sp.hi) || sp.count < 2)
                errors.add(sweep.line("count"), "[sweep] need min < max and count >= 2");
            else
                cfg.sweep = sp;
        }
        sweep.finish();
    }

    SectionReader quad(doc, "quadrature", errors);
    if (quad.present()) {
        if (auto tol = quad.number("rel_tol", false)) {
            if (*tol > 0.0 && *tol <= 1e-4)
                cfg.rel_tol = *tol;
            else
                errors.add(quad.line("rel_tol"), "[quadrature] rel_tol must be in (0, 1e-4]");
        }
        if (auto poor = quad.text("allow_poor_quality", false)) {
            if (*poor == "yes" || *poor == "true")
                cfg.allow_poor_quality = true;
            else if (*poor == "no" || *poor == "false")
                cfg.allow_poor_quality = false;
            else
                errors.add(quad.line("allow_poor_quality"),
                           "[quadrature] allow_poor_quality must be yes or no");
        }
        quad.finish();
    }

    SectionReader outp(doc, "output", errors);
    if (outp.present()) {
        if (auto prefix = outp.text("prefix")) cfg.prefix = *prefix;
        outp.finish();
    }

    if (out.errors.empty()) out.config = cfg;
    return out;
}

ScenarioParse parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ScenarioParse out;
        out.errors.push_back("cannot open scenario file: " + path);
        return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string render_scenario(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "[packet]\n";
    os << "q0 = " << format_double(cfg.q0) << "\n";
    os << "p0 = " << format_double(cfg.p0) << "\n";
    os << "delta = " << format_double(cfg.delta) << "\n";
    os << "mass = " << format_double(cfg.mass) << "\n\n";

    os << "[potential]\n";
    os << "kind = " << cfg.potential.kind_name() << "\n";
    if (const Step* s = cfg.potential.get_if<Step>())
        os << "V = " << format_double(s->height) << "\n";
    if (const SquareBarrier* b = cfg.potential.get_if<SquareBarrier>()) {
        os << "V = " << format_double(b->height) << "\n";
        os << "a = " << format_double(b->width) << "\n";
    }
    if (const LinearRamp* r = cfg.potential.get_if<LinearRamp>())
        os << "f = " << format_double(r->force) << "\n";
    if (const SampledSmooth* t = cfg.potential.get_if<SampledSmooth>()) {
        os << "points =";
        for (const auto& [q, v] : t->table)
            os << " " << format_double(q) << ":" << format_double(v);
        os << "\n";
    }
    os << "\n[detectors]\n";
    os << "positions =";
    for (double x : cfg.detectors) os << " " << format_double(x);
    os << "\n";

    if (cfg.grid) {
        os << "\n[grid]\n";
        os << "mode = explicit\n";
        os << "t_min = " << format_double(cfg.grid->t_min) << "\n";
        os << "t_max = " << format_double(cfg.grid->t_max) << "\n";
        os << "n = " << cfg.grid->n_points << "\n";
    }
    if (cfg.sweep) {
        os << "\n[sweep]\n";
        os << "parameter = " << cfg.sweep->parameter << "\n";
        os << "min = " << format_double(cfg.sweep->lo) << "\n";
        os << "max = " << format_double(cfg.sweep->hi) << "\n";
        os << "count = " << cfg.sweep->count << "\n";
    }
    os << "\n[quadrature]\n";
    os << "rel_tol = " << format_double(cfg.rel_tol) << "\n";
    os << "allow_poor_quality = " << (cfg.allow_poor_quality ? "yes" : "no") << "\n";
    os << "\n[output]\n";
    os << "prefix = " << cfg.prefix << "\n";
    return os.str();
}

}  // namespace toa
