#pragma once
// Embedded transactional storage for participants, themes, posts, tree nodes
// and points. One connection; writers are serialized by the store lock.

#include "ibis/facilitator.hpp"
#include "ibis/forum.hpp"
#include "ibis/model.hpp"
#include "ibis/post.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

struct sqlite3;

namespace ibis {

struct StoredTheme {
    Theme theme;
    FacilitatorState state;
    DiscussionTree tree;
    std::vector<Post> posts;  // chronological
};

class Store {
public:
    /// Opens or creates the database; ":memory:" gives a private in-memory
    /// database. Errors: StorageFailure.
    explicit Store(const std::string& path);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    /// Scope of a unit of work. Holds the store lock until it ends; nests
    /// through savepoints. Rolls back unless committed.
    class Transaction {
    public:
        explicit Transaction(Store& store);
        ~Transaction();
        Transaction(const Transaction&) = delete;
        Transaction& operator=(const Transaction&) = delete;
        void commit();

    private:
        Store& store_;
        std::unique_lock<std::recursive_mutex> lock_;
        int depth_ = 0;
        bool done_ = false;
    };

    void insert_participant(const ParticipantProfile& profile);
    void insert_theme(const Theme& theme, const IbisNode& root, const FacilitatorState& state);
    void update_theme(const Theme& theme);
    void save_facilitator_state(ThemeId theme, const FacilitatorState& state);
    void insert_post(const Post& post);
    /// `ordinal` is the node's attachment position; the root is 0 and has no link.
    void insert_node(ThemeId theme, const IbisNode& node, const std::optional<IbisLink>& link, std::size_t ordinal);
    void add_point(ParticipantId participant);

    std::vector<ParticipantProfile> load_participants();
    std::vector<StoredTheme> load_themes();
    std::map<ParticipantId, std::size_t> load_points();

private:
    class Statement;
    Statement& statement(const char* sql);
    void exec(const char* sql);

    sqlite3* db_ = nullptr;
    std::recursive_mutex mutex_;
    int depth_ = 0;
    std::map<std::string, std::unique_ptr<Statement>> statements_;
};

}  // namespace ibis
