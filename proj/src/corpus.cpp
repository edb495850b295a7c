#include "treegaze/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "treegaze/csv.hpp"
#include "treegaze/error.hpp"

namespace treegaze {

std::string_view to_string(Role role) { return role == Role::Head ? "Head" : "NonHead"; }

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return cols;
}

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string_view base_relation(std::string_view deprel) {
    return deprel.substr(0, deprel.find(':'));
}

// Depth of every token by walking governor chains with memoisation.
// Assumes a validated tree.
std::vector<int> depths_of(std::span<const Token> tokens) {
    const auto n = tokens.size();
    std::vector<int> depth(n, -1);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cur = i;
        while (depth[cur] < 0 && tokens[cur].head != 0) {
            stack.push_back(cur);
            cur = static_cast<std::size_t>(tokens[cur].head - 1);
        }
        if (depth[cur] < 0) depth[cur] = 0;
        int d = depth[cur];
        while (!stack.empty()) {
            depth[stack.back()] = ++d;
            stack.pop_back();
        }
    }
    return depth;
}

}  // namespace

Sentence Sentence::make(std::string id, std::vector<Token> tokens) {
    const int n = static_cast<int>(tokens.size());
    for (int i = 0; i < n; ++i) {
        if (tokens[static_cast<std::size_t>(i)].index != i + 1)
            throw TreeError(id, "token indices must run 1.." + std::to_string(n) + " without gaps");
    }
    int roots = 0;
    for (const auto& t : tokens) {
        if (t.head < 0 || t.head > n)
            throw TreeError(id, "token " + std::to_string(t.index) + " has HEAD " +
                                    std::to_string(t.head) + " out of range");
        if (t.head == t.index)
            throw TreeError(id, "token " + std::to_string(t.index) + " heads itself");
        if (t.head == 0) ++roots;
    }
    if (n > 0 && roots == 0) throw TreeError(id, "no root token (cycle in HEAD column)");
    if (roots > 1) throw TreeError(id, std::to_string(roots) + " root tokens");

    // Every token must reach the root in at most n steps.
    std::vector<char> state(static_cast<std::size_t>(n), 0);  // 0 unseen, 1 on path, 2 reaches root
    for (int i = 0; i < n; ++i) {
        std::vector<int> path;
        int cur = i + 1;
        while (cur != 0 && state[static_cast<std::size_t>(cur - 1)] == 0) {
            state[static_cast<std::size_t>(cur - 1)] = 1;
            path.push_back(cur);
            cur = tokens[static_cast<std::size_t>(cur - 1)].head;
        }
        if (cur != 0 && state[static_cast<std::size_t>(cur - 1)] == 1)
            throw TreeError(id, "cycle through token " + std::to_string(cur));
        for (int p : path) state[static_cast<std::size_t>(p - 1)] = 2;
    }
    return Sentence(std::move(id), std::move(tokens));
}

bool Sentence::has_depths() const noexcept {
    return std::all_of(tokens_.begin(), tokens_.end(), [](const Token& t) { return t.depth.has_value(); });
}

bool Sentence::has_roles() const noexcept {
    return std::all_of(tokens_.begin(), tokens_.end(), [](const Token& t) { return t.role.has_value(); });
}

std::vector<Sentence> parse_conllu(std::istream& in) {
    std::vector<Sentence> out;
    std::vector<Token> tokens;
    std::string sent_id;
    std::size_t block = 0;
    std::size_t line_no = 0;
    bool in_block = false;

    auto flush = [&] {
        if (!in_block) return;
        in_block = false;
        if (tokens.empty()) {  // comment-only block (e.g. `# newdoc`)
            sent_id.clear();
            return;
        }
        ++block;
        std::string id = sent_id.empty() ? std::to_string(block) : sent_id;
        out.push_back(Sentence::make(std::move(id), std::move(tokens)));
        tokens.clear();
        sent_id.clear();
        in_block = false;
    };

    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (trim(line).empty()) {
            flush();
            continue;
        }
        in_block = true;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            if (body.starts_with("sent_id")) {
                auto rest = trim(body.substr(7));
                if (!rest.empty() && rest.front() == '=') sent_id = std::string(trim(rest.substr(1)));
            }
            continue;
        }
        const auto cols = split_tabs(line);
        if (cols.size() != 10)
            throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                             line_no);
        const auto id = cols[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
        Token t;
        if (!parse_int(id, t.index)) throw ParseError("invalid token ID '" + std::string(id) + "'", line_no);
        if (!parse_int(cols[6], t.head))
            throw ParseError("invalid HEAD '" + std::string(cols[6]) + "'", line_no);
        t.surface = std::string(cols[1]);
        t.deprel = std::string(cols[7]);
        tokens.push_back(std::move(t));
    }
    flush();
    return out;
}

std::vector<Sentence> parse_conllu(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_conllu(in);
}

void write_conllu(std::ostream& out, std::span<const Sentence> sentences) {
    for (const auto& s : sentences) {
        out << "# sent_id = " << s.id() << '\n';
        for (const auto& t : s.tokens()) {
            out << t.index << '\t' << t.surface << "\t_\t_\t_\t_\t" << t.head << '\t' << t.deprel
                << "\t_\t_\n";
        }
        out << '\n';
    }
}

Sentence compute_depths(Sentence sentence) {
    const auto depth = depths_of(sentence.tokens_);
    for (std::size_t i = 0; i < depth.size(); ++i) sentence.tokens_[i].depth = depth[i];
    return sentence;
}

Sentence label_roles(Sentence sentence) {
    for (auto& t : sentence.tokens_) {
        if (!t.depth) throw DomainError("label_roles: depths not computed for sentence " + sentence.id_);
        t.role = *t.depth <= 1 ? Role::Head : Role::NonHead;
    }
    return sentence;
}

Sentence annotate(Sentence sentence) { return label_roles(compute_depths(std::move(sentence))); }

int max_depth(const Sentence& sentence) {
    int best = 0;
    for (const auto& t : sentence.tokens()) {
        if (!t.depth) throw DomainError("max_depth: depths not computed for sentence " + sentence.id());
        best = std::max(best, *t.depth);
    }
    return best;
}

int count_clauses(const Sentence& sentence) {
    static constexpr std::array<std::string_view, 6> kClausal{"csubj", "ccomp", "xcomp",
                                                             "advcl", "acl",   "parataxis"};
    int n = 1;
    for (const auto& t : sentence.tokens()) {
        const auto base = base_relation(t.deprel);
        if (std::find(kClausal.begin(), kClausal.end(), base) != kClausal.end()) ++n;
    }
    return n;
}

std::vector<Role> roles_of(const Sentence& sentence) {
    std::vector<Role> roles;
    roles.reserve(sentence.size());
    for (const auto& t : sentence.tokens()) {
        if (!t.role) throw DomainError("roles not labeled for sentence " + sentence.id());
        roles.push_back(*t.role);
    }
    return roles;
}

void write_role_table(std::ostream& out, std::span<const Sentence> sentences) {
    out << "sent_id,token_index,surface,head,deprel,depth,role\n";
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens()) {
            out << csv::escape(s.id()) << ',' << t.index << ',' << csv::escape(t.surface) << ','
                << t.head << ',' << csv::escape(t.deprel) << ',';
            if (t.depth) out << *t.depth;
            out << ',';
            if (t.role) out << to_string(*t.role);
            out << '\n';
        }
    }
}

}  // namespace treegaze
