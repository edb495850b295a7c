#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treegaze {

/// Syntactic centrality of a word: depth 0 or 1 is a Head, deeper words are NonHead.
enum class Role { Head, NonHead };

std::string_view to_string(Role role);

struct Token {
    int index = 0;   // 1-based position
    std::string surface;
    int head = 0;    // index of the governor, 0 for the root
    std::string deprel;
    std::optional<int> depth;
    std::optional<Role> role;

    friend bool operator==(const Token&, const Token&) = default;
};

/// A dependency-parsed sentence. Construction through `Sentence::make` (or
/// `parse_conllu`) guarantees the heads form a single-rooted tree.
class Sentence {
public:
    /// Validates token numbering and tree shape; throws TreeError otherwise.
    static Sentence make(std::string id, std::vector<Token> tokens);

    const std::string& id() const noexcept { return id_; }
    std::span<const Token> tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    const Token& token(int index) const { return tokens_.at(static_cast<std::size_t>(index - 1)); }

    bool has_depths() const noexcept;
    bool has_roles() const noexcept;

    friend bool operator==(const Sentence&, const Sentence&) = default;

private:
    Sentence(std::string id, std::vector<Token> tokens)
        : id_(std::move(id)), tokens_(std::move(tokens)) {}

    friend Sentence compute_depths(Sentence);
    friend Sentence label_roles(Sentence);

    std::string id_;
    std::vector<Token> tokens_;
};

/// Reads a CoNLL-U document. Multiword ranges (`3-4`) and empty nodes (`5.1`)
/// are skipped; only ID, FORM, HEAD and DEPREL are kept. Sentence ids come from
/// `# sent_id = ...`, else the 1-based block ordinal.
std::vector<Sentence> parse_conllu(std::istream& in);
std::vector<Sentence> parse_conllu(std::string_view text);

/// Writes sentences as CoNLL-U with `_` in the columns this toolkit ignores.
void write_conllu(std::ostream& out, std::span<const Sentence> sentences);

/// Number of dependency links from each token to the root (root = 0).
Sentence compute_depths(Sentence sentence);

/// Head iff depth <= 1. Requires depths.
Sentence label_roles(Sentence sentence);

/// compute_depths followed by label_roles.
Sentence annotate(Sentence sentence);

int max_depth(const Sentence& sentence);

/// 1 + number of tokens whose base deprel is clausal
/// (csubj, ccomp, xcomp, advcl, acl, parataxis).
int count_clauses(const Sentence& sentence);

/// Per-token roles in token order; requires roles.
std::vector<Role> roles_of(const Sentence& sentence);

/// CSV `sent_id,token_index,surface,head,deprel,depth,role`.
void write_role_table(std::ostream& out, std::span<const Sentence> sentences);

}  // namespace treegaze
