#include "incprune/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>

namespace incprune {

namespace {

struct Token {
    std::string text;
    int line;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1;
    std::string word;
    auto flush = [&]() {
        if (!word.empty()) {
            tokens.push_back({word, line});
            word.clear();
        }
    };
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '#') {
            flush();
            while (i < text.size() && text[i] != '\n') ++i;
            --i;
        } else if (c == '\n') {
            flush();
            ++line;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == ':') {
            flush();
            tokens.push_back({":", line});
        } else {
            word += c;
        }
    }
    flush();
    return tokens;
}

bool is_number(const std::string& s, double* out = nullptr) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    if (out) *out = v;
    return true;
}

bool is_count(const std::string& s, int* out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    *out = std::atoi(s.c_str());
    return true;
}

constexpr int kWildcard = -1;

class Parser {
  public:
    explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

    ParseResult run() {
        while (!at_end()) statement();
        finish();
        return std::move(result_);
    }

  private:
    struct Mutation {
        int rank;  // count of non-wildcard ids; lower applies first
        std::function<void()> apply;
    };

    [[noreturn]] void fail(int line, const std::string& msg) { throw ParseError(line, msg); }

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }

    void expect_colon(const std::string& after) {
        if (at_end() || peek().text != ":") {
            fail(at_end() ? last_line_ : peek().line, "expected ':' after '" + after + "'");
        }
        take();
    }

    double take_number(const std::string& what) {
        if (at_end()) fail(last_line_, "expected " + what + ", found end of file");
        const Token t = take();
        double v;
        if (!is_number(t.text, &v)) fail(t.line, "expected " + what + ", found '" + t.text + "'");
        return v;
    }

    // Tokens remaining on the given source line.
    std::vector<Token> rest_of_line(int line) {
        std::vector<Token> out;
        while (!at_end() && peek().line == line) out.push_back(take());
        return out;
    }

    void statement() {
        const Token key = take();
        last_line_ = key.line;
        if (key.text == "discount") {
            expect_colon(key.text);
            discount_ = take_number("discount value");
            discount_line_ = key.line;
        } else if (key.text == "values") {
            expect_colon(key.text);
            if (at_end()) fail(key.line, "expected 'reward' or 'cost'");
            const Token v = take();
            if (v.text == "reward") {
                cost_ = false;
            } else if (v.text == "cost") {
                cost_ = true;
            } else {
                fail(v.line, "values must be 'reward' or 'cost', found '" + v.text + "'");
            }
            have_values_ = true;
        } else if (key.text == "states") {
            expect_colon(key.text);
            read_name_section(key.line, result_.state_names, n_states_, "state");
        } else if (key.text == "actions") {
            expect_colon(key.text);
            read_name_section(key.line, result_.action_names, n_actions_, "action");
        } else if (key.text == "observations") {
            expect_colon(key.text);
            read_name_section(key.line, result_.obs_names, n_obs_, "observation");
        } else if (key.text == "start") {
            read_start(key.line);
        } else if (key.text == "T") {
            expect_colon(key.text);
            read_transition(key.line);
        } else if (key.text == "O") {
            expect_colon(key.text);
            read_observation(key.line);
        } else if (key.text == "R") {
            expect_colon(key.text);
            read_reward(key.line);
        } else {
            fail(key.line, "unknown keyword '" + key.text + "'");
        }
    }

    void read_name_section(int line, std::vector<std::string>& names, int& count,
                           const std::string& kind) {
        const std::vector<Token> rest = rest_of_line(line);
        if (rest.empty()) fail(line, kind + " section is empty");
        int n;
        if (rest.size() == 1 && is_count(rest[0].text, &n)) {
            if (n < 1) fail(line, kind + " count must be positive");
            count = n;
            names.clear();
        } else {
            names.clear();
            for (const Token& t : rest) names.push_back(t.text);
            count = static_cast<int>(names.size());
        }
    }

    void read_start(int line) {
        if (!at_end() && peek().text != ":") {
            // 'start include:' / 'start exclude:' have no agreed semantics;
            // refuse rather than guess.
            fail(line, "unsupported construct 'start " + peek().text + "'");
        }
        expect_colon("start");
        std::vector<Token> rest = rest_of_line(line);
        if (rest.empty()) {
            // Distribution on the following line(s).
            if (n_states_ <= 0) fail(line, "start before states section");
            for (int i = 0; i < n_states_; ++i) {
                result_.start.push_back(take_number("start probability"));
            }
        } else if (rest.size() == 1 && rest[0].text == "uniform") {
            if (n_states_ <= 0) fail(line, "start before states section");
            result_.start.assign(static_cast<size_t>(n_states_), 1.0 / n_states_);
        } else if (rest.size() == 1 && !is_number(rest[0].text)) {
            const int s = resolve(rest[0], result_.state_names, n_states_, "state");
            if (s == kWildcard) fail(line, "start state cannot be a wildcard");
            result_.start.assign(static_cast<size_t>(n_states_), 0.0);
            result_.start[static_cast<size_t>(s)] = 1.0;
        } else {
            for (const Token& t : rest) {
                double v;
                if (!is_number(t.text, &v)) fail(t.line, "bad start probability '" + t.text + "'");
                result_.start.push_back(v);
            }
        }
        result_.warnings.push_back(
            "line " + std::to_string(line) +
            ": start distribution parsed but unused (value function is belief-independent)");
    }

    int resolve(const Token& t, const std::vector<std::string>& names, int count,
                const std::string& kind) {
        if (t.text == "*") return kWildcard;
        int idx;
        if (is_count(t.text, &idx)) {
            if (idx < 0 || idx >= count) {
                fail(t.line, kind + " index " + t.text + " out of range");
            }
            return idx;
        }
        const auto it = std::find(names.begin(), names.end(), t.text);
        if (it == names.end()) fail(t.line, "unresolved " + kind + " identifier '" + t.text + "'");
        return static_cast<int>(it - names.begin());
    }

    // Reads "id (: id)*" up to max_ids entries; stops when the next token
    // is not an id continuation.
    std::vector<Token> read_id_list(int max_ids, const std::string& stmt, int line) {
        std::vector<Token> ids;
        while (true) {
            if (at_end()) fail(line, "unterminated '" + stmt + "' statement");
            ids.push_back(take());
            if (static_cast<int>(ids.size()) == max_ids) break;
            if (at_end() || peek().text != ":") break;
            take();
        }
        return ids;
    }

    static int rank_of(const std::vector<int>& ids) {
        int r = 0;
        for (int v : ids) {
            if (v != kWildcard) ++r;
        }
        return r;
    }

    void for_each(int id, int count, const std::function<void(int)>& fn) {
        if (id == kWildcard) {
            for (int i = 0; i < count; ++i) fn(i);
        } else {
            fn(id);
        }
    }

    void require_sections(int line) {
        if (n_states_ <= 0 || n_actions_ <= 0 || n_obs_ <= 0) {
            fail(line, "T:/O:/R: statements before the states/actions/observations sections");
        }
    }

    void read_transition(int line) {
        require_sections(line);
        const std::vector<Token> toks = read_id_list(3, "T", line);
        const int a = resolve(toks[0], result_.action_names, n_actions_, "action");
        if (toks.size() == 3) {
            const int s = resolve(toks[1], result_.state_names, n_states_, "state");
            const int s2 = resolve(toks[2], result_.state_names, n_states_, "state");
            const double p = take_number("transition probability");
            add_mutation(rank_of({a, s, s2}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s, n_states_, [&](int is) {
                        for_each(s2, n_states_, [&](int is2) {
                            t_[static_cast<size_t>(ia)](is, is2) = p;
                            t_line_[static_cast<size_t>(ia)][static_cast<size_t>(is)] = line;
                        });
                    });
                });
            });
        } else if (toks.size() == 2) {
            const int s = resolve(toks[1], result_.state_names, n_states_, "state");
            const std::vector<double> row = read_row(n_states_, "T", line);
            add_mutation(rank_of({a, s}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s, n_states_, [&](int is) {
                        for (int j = 0; j < n_states_; ++j) {
                            t_[static_cast<size_t>(ia)](is, j) = row[static_cast<size_t>(j)];
                        }
                        t_line_[static_cast<size_t>(ia)][static_cast<size_t>(is)] = line;
                    });
                });
            });
        } else {
            const MatrixSpec m = read_matrix(n_states_, n_states_, "T", line, true);
            add_mutation(rank_of({a}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    t_[static_cast<size_t>(ia)] = m.values;
                    for (int is = 0; is < n_states_; ++is) {
                        t_line_[static_cast<size_t>(ia)][static_cast<size_t>(is)] = line;
                    }
                });
            });
        }
    }

    void read_observation(int line) {
        require_sections(line);
        const std::vector<Token> toks = read_id_list(3, "O", line);
        const int a = resolve(toks[0], result_.action_names, n_actions_, "action");
        if (toks.size() == 3) {
            const int s2 = resolve(toks[1], result_.state_names, n_states_, "state");
            const int z = resolve(toks[2], result_.obs_names, n_obs_, "observation");
            const double p = take_number("observation probability");
            add_mutation(rank_of({a, s2, z}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s2, n_states_, [&](int is2) {
                        for_each(z, n_obs_, [&](int iz) {
                            o_[static_cast<size_t>(ia)](is2, iz) = p;
                            o_line_[static_cast<size_t>(ia)][static_cast<size_t>(is2)] = line;
                        });
                    });
                });
            });
        } else if (toks.size() == 2) {
            const int s2 = resolve(toks[1], result_.state_names, n_states_, "state");
            const std::vector<double> row = read_row(n_obs_, "O", line);
            add_mutation(rank_of({a, s2}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s2, n_states_, [&](int is2) {
                        for (int j = 0; j < n_obs_; ++j) {
                            o_[static_cast<size_t>(ia)](is2, j) = row[static_cast<size_t>(j)];
                        }
                        o_line_[static_cast<size_t>(ia)][static_cast<size_t>(is2)] = line;
                    });
                });
            });
        } else {
            const MatrixSpec m = read_matrix(n_states_, n_obs_, "O", line, n_obs_ == n_states_);
            add_mutation(rank_of({a}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    o_[static_cast<size_t>(ia)] = m.values;
                    for (int is2 = 0; is2 < n_states_; ++is2) {
                        o_line_[static_cast<size_t>(ia)][static_cast<size_t>(is2)] = line;
                    }
                });
            });
        }
    }

    void read_reward(int line) {
        require_sections(line);
        const std::vector<Token> toks = read_id_list(4, "R", line);
        if (toks.size() < 2) fail(line, "R: needs at least an action and a state");
        const int a = resolve(toks[0], result_.action_names, n_actions_, "action");
        const int s = resolve(toks[1], result_.state_names, n_states_, "state");
        auto write = [this](int ia, int is, int is2, int iz, double v) {
            r_[((static_cast<size_t>(ia) * n_states_ + is) * n_states_ + is2) * n_obs_ + iz] = v;
        };
        if (toks.size() == 4) {
            const int s2 = resolve(toks[2], result_.state_names, n_states_, "state");
            const int z = resolve(toks[3], result_.obs_names, n_obs_, "observation");
            const double v = take_number("reward value");
            add_mutation(rank_of({a, s, s2, z}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s, n_states_, [&](int is) {
                        for_each(s2, n_states_, [&](int is2) {
                            for_each(z, n_obs_, [&](int iz) { write(ia, is, is2, iz, v); });
                        });
                    });
                });
            });
        } else if (toks.size() == 3) {
            const int s2 = resolve(toks[2], result_.state_names, n_states_, "state");
            const std::vector<double> row = read_row(n_obs_, "R", line);
            add_mutation(rank_of({a, s, s2}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s, n_states_, [&](int is) {
                        for_each(s2, n_states_, [&](int is2) {
                            for (int iz = 0; iz < n_obs_; ++iz) {
                                write(ia, is, is2, iz, row[static_cast<size_t>(iz)]);
                            }
                        });
                    });
                });
            });
        } else {
            const MatrixSpec m = read_matrix(n_states_, n_obs_, "R", line, false);
            add_mutation(rank_of({a, s}), [=, this]() {
                for_each(a, n_actions_, [&](int ia) {
                    for_each(s, n_states_, [&](int is) {
                        for (int is2 = 0; is2 < n_states_; ++is2) {
                            for (int iz = 0; iz < n_obs_; ++iz) {
                                write(ia, is, is2, iz, m.values(is2, iz));
                            }
                        }
                    });
                });
            });
        }
    }

    std::vector<double> read_row(int n, const std::string& stmt, int line) {
        (void)line;
        if (!at_end() && peek().text == "uniform") {
            take();
            return std::vector<double>(static_cast<size_t>(n), 1.0 / n);
        }
        std::vector<double> row;
        row.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) row.push_back(take_number(stmt + " row entry"));
        return row;
    }

    struct MatrixSpec {
        Matrix values;
    };

    MatrixSpec read_matrix(int rows, int cols, const std::string& stmt, int line,
                           bool allow_identity) {
        if (!at_end() && peek().text == "uniform") {
            take();
            return {Matrix::Constant(rows, cols, 1.0 / cols)};
        }
        if (!at_end() && peek().text == "identity") {
            const Token t = take();
            if (!allow_identity) fail(t.line, "'identity' is invalid for this " + stmt + " form");
            return {Matrix::Identity(rows, cols)};
        }
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m(i, j) = take_number(stmt + " matrix entry");
        }
        (void)line;
        return {m};
    }

    void add_mutation(int rank, std::function<void()> fn) {
        if (!storage_ready_) {
            t_.assign(static_cast<size_t>(n_actions_), Matrix::Zero(n_states_, n_states_));
            o_.assign(static_cast<size_t>(n_actions_), Matrix::Zero(n_states_, n_obs_));
            r_.assign(static_cast<size_t>(n_actions_) * n_states_ * n_states_ * n_obs_, 0.0);
            t_line_.assign(static_cast<size_t>(n_actions_),
                           std::vector<int>(static_cast<size_t>(n_states_), 0));
            o_line_.assign(static_cast<size_t>(n_actions_),
                           std::vector<int>(static_cast<size_t>(n_states_), 0));
            storage_ready_ = true;
        }
        mutations_.push_back({rank, std::move(fn)});
    }

    void finish() {
        if (n_states_ <= 0) fail(0, "missing mandatory section 'states:'");
        if (n_actions_ <= 0) fail(0, "missing mandatory section 'actions:'");
        if (n_obs_ <= 0) fail(0, "missing mandatory section 'observations:'");
        if (!discount_) fail(0, "missing mandatory section 'discount:'");
        if (!have_values_) fail(0, "missing mandatory section 'values:'");
        if (!storage_ready_) fail(0, "no T:/O: statements found");

        std::stable_sort(mutations_.begin(), mutations_.end(),
                         [](const Mutation& a, const Mutation& b) { return a.rank < b.rank; });
        for (const Mutation& m : mutations_) m.apply();

        for (int a = 0; a < n_actions_; ++a) {
            for (int s = 0; s < n_states_; ++s) {
                const double tsum = t_[static_cast<size_t>(a)].row(s).sum();
                if (std::abs(tsum - 1.0) > 1e-6) {
                    fail(t_line_[static_cast<size_t>(a)][static_cast<size_t>(s)],
                         "transition row for action " + std::to_string(a) + ", state " +
                             std::to_string(s) + " sums to " + std::to_string(tsum));
                }
                const double osum = o_[static_cast<size_t>(a)].row(s).sum();
                if (std::abs(osum - 1.0) > 1e-6) {
                    fail(o_line_[static_cast<size_t>(a)][static_cast<size_t>(s)],
                         "observation row for action " + std::to_string(a) + ", state " +
                             std::to_string(s) + " sums to " + std::to_string(osum));
                }
            }
        }

        PomdpModel& model = result_.model;
        model.n_states = n_states_;
        model.n_actions = n_actions_;
        model.n_observations = n_obs_;
        model.transition = t_;
        model.observation = o_;
        model.discount = *discount_;
        model.reward = Matrix::Zero(n_actions_, n_states_);
        // Collapse R(a,s,s',z) to expected immediate reward under the model
        // probabilities.
        for (int a = 0; a < n_actions_; ++a) {
            for (int s = 0; s < n_states_; ++s) {
                double expected = 0.0;
                for (int s2 = 0; s2 < n_states_; ++s2) {
                    for (int z = 0; z < n_obs_; ++z) {
                        const double raw =
                            r_[((static_cast<size_t>(a) * n_states_ + s) * n_states_ + s2) *
                                   n_obs_ +
                               z];
                        expected += t_[static_cast<size_t>(a)](s, s2) *
                                    o_[static_cast<size_t>(a)](s2, z) * raw;
                    }
                }
                model.reward(a, s) = cost_ ? -expected : expected;
            }
        }
        (void)discount_line_;
    }

    std::vector<Token> tokens_;
    size_t pos_ = 0;
    int last_line_ = 1;

    ParseResult result_;
    int n_states_ = 0, n_actions_ = 0, n_obs_ = 0;
    std::optional<double> discount_;
    int discount_line_ = 0;
    bool have_values_ = false;
    bool cost_ = false;

    bool storage_ready_ = false;
    std::vector<Matrix> t_, o_;
    std::vector<double> r_;
    std::vector<std::vector<int>> t_line_, o_line_;
    std::vector<Mutation> mutations_;
};

}  // namespace

ParseResult parse_pomdp(const std::string& text) { return Parser(text).run(); }

PomdpModel parse(const std::string& text) { return parse_pomdp(text).model; }

std::vector<Diagnostic> validate(const PomdpModel& model) {
    std::vector<Diagnostic> out;
    auto report = [&](const std::string& msg) { out.push_back({msg}); };

    if (model.n_states < 1) report("model has no states");
    if (model.n_actions < 1) report("model has no actions");
    if (model.n_observations < 1) report("model has no observations");
    if (!(model.discount >= 0.0 && model.discount < 1.0)) {
        report("discount " + std::to_string(model.discount) + " outside [0,1)");
    }
    if (static_cast<int>(model.transition.size()) != model.n_actions) {
        report("transition model has " + std::to_string(model.transition.size()) +
               " actions, expected " + std::to_string(model.n_actions));
        return out;
    }
    if (static_cast<int>(model.observation.size()) != model.n_actions) {
        report("observation model has " + std::to_string(model.observation.size()) +
               " actions, expected " + std::to_string(model.n_actions));
        return out;
    }
    if (model.reward.rows() != model.n_actions || model.reward.cols() != model.n_states) {
        report("reward matrix is " + std::to_string(model.reward.rows()) + "x" +
               std::to_string(model.reward.cols()) + ", expected " +
               std::to_string(model.n_actions) + "x" + std::to_string(model.n_states));
        return out;
    }
    for (int a = 0; a < model.n_actions; ++a) {
        const Matrix& t = model.transition[a];
        const Matrix& o = model.observation[a];
        if (t.rows() != model.n_states || t.cols() != model.n_states) {
            report("transition matrix for action " + std::to_string(a) + " has wrong shape");
            continue;
        }
        if (o.rows() != model.n_states || o.cols() != model.n_observations) {
            report("observation matrix for action " + std::to_string(a) + " has wrong shape");
            continue;
        }
        for (int s = 0; s < model.n_states; ++s) {
            const double tsum = t.row(s).sum();
            if (std::abs(tsum - 1.0) > 1e-6) {
                report("transition row (action " + std::to_string(a) + ", state " +
                       std::to_string(s) + ") sums to " + std::to_string(tsum));
            }
            const double osum = o.row(s).sum();
            if (std::abs(osum - 1.0) > 1e-6) {
                report("observation row (action " + std::to_string(a) + ", state " +
                       std::to_string(s) + ") sums to " + std::to_string(osum));
            }
        }
    }
    if (!model.reward.allFinite()) report("reward matrix contains non-finite values");
    return out;
}

std::string serialize(const PomdpModel& model) {
    std::string out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out += "discount: " + num(model.discount) + "\n";
    out += "values: reward\n";
    out += "states: " + std::to_string(model.n_states) + "\n";
    out += "actions: " + std::to_string(model.n_actions) + "\n";
    out += "observations: " + std::to_string(model.n_observations) + "\n";
    for (int a = 0; a < model.n_actions; ++a) {
        for (int s = 0; s < model.n_states; ++s) {
            for (int s2 = 0; s2 < model.n_states; ++s2) {
                out += "T: " + std::to_string(a) + " : " + std::to_string(s) + " : " +
                       std::to_string(s2) + " " + num(model.transition[a](s, s2)) + "\n";
            }
        }
    }
    for (int a = 0; a < model.n_actions; ++a) {
        for (int s2 = 0; s2 < model.n_states; ++s2) {
            for (int z = 0; z < model.n_observations; ++z) {
                out += "O: " + std::to_string(a) + " : " + std::to_string(s2) + " : " +
                       std::to_string(z) + " " + num(model.observation[a](s2, z)) + "\n";
            }
        }
    }
    for (int a = 0; a < model.n_actions; ++a) {
        for (int s = 0; s < model.n_states; ++s) {
            out += "R: " + std::to_string(a) + " : " + std::to_string(s) + " : * : * " +
                   num(model.reward(a, s)) + "\n";
        }
    }
    return out;
}

}  // namespace incprune
