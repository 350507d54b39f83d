#include "ibis/store.hpp"

#include "ibis/error.hpp"

#include <sqlite3.h>

namespace ibis {

namespace {

[[noreturn]] void fail(sqlite3* db, const std::string& what)
{
    throw Error(ErrorCode::StorageFailure, what + ": " + (db != nullptr ? sqlite3_errmsg(db) : "no database"));
}

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS participants (
    id INTEGER PRIMARY KEY,
    name TEXT NOT NULL,
    gender TEXT NOT NULL,
    email TEXT NOT NULL UNIQUE,
    photo_ref TEXT,
    registered_at INTEGER NOT NULL,
    consent INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS themes (
    id INTEGER PRIMARY KEY,
    title TEXT NOT NULL,
    description TEXT NOT NULL,
    created_by INTEGER NOT NULL,
    policy TEXT NOT NULL,
    open INTEGER NOT NULL,
    created_at INTEGER NOT NULL,
    facilitator_state TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS posts (
    id INTEGER PRIMARY KEY,
    theme_id INTEGER NOT NULL REFERENCES themes(id),
    author_id INTEGER NOT NULL,
    parent_post_id INTEGER,
    text TEXT NOT NULL,
    satisfaction INTEGER,
    created_at INTEGER NOT NULL,
    is_agent INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS posts_by_theme ON posts(theme_id, created_at, id);
CREATE TABLE IF NOT EXISTS nodes (
    theme_id INTEGER NOT NULL REFERENCES themes(id),
    node_id INTEGER NOT NULL,
    ordinal INTEGER NOT NULL,
    parent_id INTEGER,
    node_type TEXT NOT NULL,
    text TEXT NOT NULL,
    author_id INTEGER NOT NULL,
    source_post_id INTEGER NOT NULL,
    is_agent INTEGER NOT NULL,
    confidence REAL NOT NULL,
    created_at INTEGER NOT NULL,
    PRIMARY KEY (theme_id, node_id),
    UNIQUE (theme_id, ordinal)
);
CREATE TABLE IF NOT EXISTS points (
    participant_id INTEGER PRIMARY KEY,
    points INTEGER NOT NULL
);
)sql";

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

class Store::Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db)
    {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare failed");
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& start()
    {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
        next_ = 1;
        return *this;
    }
    Statement& bind(std::int64_t v)
    {
        check(sqlite3_bind_int64(stmt_, next_++, v));
        return *this;
    }
    Statement& bind(double v)
    {
        check(sqlite3_bind_double(stmt_, next_++, v));
        return *this;
    }
    Statement& bind(const std::string& v)
    {
        check(sqlite3_bind_text(stmt_, next_++, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Statement& bind_null()
    {
        check(sqlite3_bind_null(stmt_, next_++));
        return *this;
    }
    template <typename T>
    Statement& bind(const std::optional<T>& v)
    {
        return v ? bind(*v) : bind_null();
    }

    /// True while rows are available.
    bool step()
    {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        if (rc == SQLITE_CONSTRAINT) {
            sqlite3_reset(stmt_);
            throw Error(ErrorCode::StorageFailure, std::string("constraint violated: ") + sqlite3_errmsg(db_));
        }
        fail(db_, "step failed");
    }
    void run()
    {
        while (step()) {
        }
    }

    std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
    double real(int col) const { return sqlite3_column_double(stmt_, col); }
    bool null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
    std::string text(int col) const
    {
        const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
        return p == nullptr ? std::string{} : std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)));
    }

private:
    void check(int rc)
    {
        if (rc != SQLITE_OK) fail(db_, "bind failed");
    }

    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
    int next_ = 1;
};

Store::Store(const std::string& path)
{
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string msg = db_ != nullptr ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw Error(ErrorCode::StorageFailure, "cannot open " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    try {
        if (path != ":memory:") exec("PRAGMA journal_mode=WAL");
        exec("PRAGMA synchronous=NORMAL");
        exec("PRAGMA foreign_keys=ON");
        exec(kSchema);
    } catch (...) {
        sqlite3_close(db_);
        throw;
    }
}

Store::~Store()
{
    statements_.clear();
    sqlite3_close(db_);
}

void Store::exec(const char* sql)
{
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err != nullptr ? err : "unknown error";
        sqlite3_free(err);
        throw Error(ErrorCode::StorageFailure, msg);
    }
}

Store::Statement& Store::statement(const char* sql)
{
    auto& slot = statements_[sql];
    if (!slot) slot = std::make_unique<Statement>(db_, sql);
    return slot->start();
}

Store::Transaction::Transaction(Store& store) : store_(store), lock_(store.mutex_), depth_(store.depth_)
{
    store_.exec(depth_ == 0 ? "BEGIN IMMEDIATE" : ("SAVEPOINT sp" + std::to_string(depth_)).c_str());
    ++store_.depth_;
}

Store::Transaction::~Transaction()
{
    if (done_) return;
    try {
        if (depth_ == 0) {
            store_.exec("ROLLBACK");
        } else {
            const std::string name = "sp" + std::to_string(depth_);
            store_.exec(("ROLLBACK TO " + name + "; RELEASE " + name).c_str());
        }
    } catch (const Error&) {
        // Nothing sensible left to do in a destructor.
    }
    --store_.depth_;
}

void Store::Transaction::commit()
{
    store_.exec(depth_ == 0 ? "COMMIT" : ("RELEASE sp" + std::to_string(depth_)).c_str());
    done_ = true;
    --store_.depth_;
}

void Store::insert_participant(const ParticipantProfile& p)
{
    std::lock_guard lock(mutex_);
    statement("INSERT INTO participants (id, name, gender, email, photo_ref, registered_at, consent) "
              "VALUES (?, ?, ?, ?, ?, ?, ?)")
        .bind(as_int(p.participant_id.value))
        .bind(p.name)
        .bind(std::string(to_string(p.gender)))
        .bind(p.email)
        .bind(p.photo_ref)
        .bind(std::int64_t{to_epoch_ms(p.registered_at)})
        .bind(std::int64_t{p.consent ? 1 : 0})
        .run();
}

void Store::insert_theme(const Theme& t, const IbisNode& root, const FacilitatorState& state)
{
    Transaction tx(*this);
    statement("INSERT INTO themes (id, title, description, created_by, policy, open, created_at, facilitator_state) "
              "VALUES (?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(as_int(t.theme_id.value))
        .bind(t.title)
        .bind(t.description)
        .bind(as_int(t.created_by.value))
        .bind(policy_to_json(t.policy).dump())
        .bind(std::int64_t{t.open ? 1 : 0})
        .bind(std::int64_t{to_epoch_ms(t.created_at)})
        .bind(state_to_json(state).dump())
        .run();
    insert_node(t.theme_id, root, std::nullopt, 0);
    tx.commit();
}

void Store::update_theme(const Theme& t)
{
    std::lock_guard lock(mutex_);
    statement("UPDATE themes SET title = ?, description = ?, policy = ?, open = ? WHERE id = ?")
        .bind(t.title)
        .bind(t.description)
        .bind(policy_to_json(t.policy).dump())
        .bind(std::int64_t{t.open ? 1 : 0})
        .bind(as_int(t.theme_id.value))
        .run();
}

void Store::save_facilitator_state(ThemeId theme, const FacilitatorState& state)
{
    std::lock_guard lock(mutex_);
    statement("UPDATE themes SET facilitator_state = ? WHERE id = ?")
        .bind(state_to_json(state).dump())
        .bind(as_int(theme.value))
        .run();
}

void Store::insert_post(const Post& p)
{
    std::lock_guard lock(mutex_);
    std::optional<std::int64_t> parent;
    if (p.parent_post_id) parent = as_int(p.parent_post_id->value);
    std::optional<std::int64_t> satisfaction;
    if (p.satisfaction) satisfaction = *p.satisfaction;
    statement("INSERT INTO posts (id, theme_id, author_id, parent_post_id, text, satisfaction, created_at, is_agent) "
              "VALUES (?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(as_int(p.post_id.value))
        .bind(as_int(p.theme_id.value))
        .bind(as_int(p.author_id.value))
        .bind(parent)
        .bind(p.text)
        .bind(satisfaction)
        .bind(std::int64_t{to_epoch_ms(p.created_at)})
        .bind(std::int64_t{p.is_agent ? 1 : 0})
        .run();
}

void Store::insert_node(ThemeId theme, const IbisNode& n, const std::optional<IbisLink>& link, std::size_t ordinal)
{
    std::lock_guard lock(mutex_);
    std::optional<std::int64_t> parent;
    if (link) parent = as_int(link->parent_id.value);
    statement("INSERT INTO nodes (theme_id, node_id, ordinal, parent_id, node_type, text, author_id, source_post_id, "
              "is_agent, confidence, created_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(as_int(theme.value))
        .bind(as_int(n.node_id.value))
        .bind(static_cast<std::int64_t>(ordinal))
        .bind(parent)
        .bind(std::string(to_string(n.node_type)))
        .bind(n.text)
        .bind(as_int(n.author_id.value))
        .bind(as_int(n.source_post_id.value))
        .bind(std::int64_t{n.is_agent ? 1 : 0})
        .bind(n.confidence)
        .bind(std::int64_t{to_epoch_ms(n.created_at)})
        .run();
}

void Store::add_point(ParticipantId participant)
{
    std::lock_guard lock(mutex_);
    statement("INSERT INTO points (participant_id, points) VALUES (?, 1) "
              "ON CONFLICT(participant_id) DO UPDATE SET points = points + 1")
        .bind(as_int(participant.value))
        .run();
}

std::vector<ParticipantProfile> Store::load_participants()
{
    std::lock_guard lock(mutex_);
    std::vector<ParticipantProfile> out;
    auto& s = statement("SELECT id, name, gender, email, photo_ref, registered_at, consent FROM participants ORDER BY id");
    while (s.step()) {
        ParticipantProfile p;
        p.participant_id = ParticipantId{static_cast<std::uint64_t>(s.integer(0))};
        p.name = s.text(1);
        p.gender = parse_gender(s.text(2)).value_or(Gender::Undisclosed);
        p.email = s.text(3);
        if (!s.null(4)) p.photo_ref = s.text(4);
        p.registered_at = from_epoch_ms(s.integer(5));
        p.consent = s.integer(6) != 0;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

IbisNode read_node(const auto& s)
{
    IbisNode n;
    n.node_id = NodeId{static_cast<std::uint64_t>(s.integer(0))};
    auto type = parse_node_type(s.text(2));
    if (!type) throw Error(ErrorCode::StorageFailure, "stored node has unknown type " + s.text(2));
    n.node_type = *type;
    n.text = s.text(3);
    n.author_id = ParticipantId{static_cast<std::uint64_t>(s.integer(4))};
    n.source_post_id = PostId{static_cast<std::uint64_t>(s.integer(5))};
    n.is_agent = s.integer(6) != 0;
    n.confidence = s.real(7);
    n.created_at = from_epoch_ms(s.integer(8));
    return n;
}

}  // namespace

std::vector<StoredTheme> Store::load_themes()
{
    std::lock_guard lock(mutex_);
    std::vector<StoredTheme> out;
    std::vector<std::pair<Theme, FacilitatorState>> headers;
    {
        auto& s = statement("SELECT id, title, description, created_by, policy, open, created_at, facilitator_state "
                            "FROM themes ORDER BY id");
        while (s.step()) {
            Theme t;
            t.theme_id = ThemeId{static_cast<std::uint64_t>(s.integer(0))};
            t.title = s.text(1);
            t.description = s.text(2);
            t.created_by = ParticipantId{static_cast<std::uint64_t>(s.integer(3))};
            t.policy = policy_from_json(nlohmann::json::parse(s.text(4)));
            t.open = s.integer(5) != 0;
            t.created_at = from_epoch_ms(s.integer(6));
            headers.emplace_back(std::move(t), state_from_json(nlohmann::json::parse(s.text(7))));
        }
    }
    for (auto& [theme, state] : headers) {
        auto& s = statement("SELECT node_id, parent_id, node_type, text, author_id, source_post_id, is_agent, confidence, "
                            "created_at FROM nodes WHERE theme_id = ? ORDER BY ordinal");
        s.bind(as_int(theme.theme_id.value));
        if (!s.step()) throw Error(ErrorCode::StorageFailure, "theme " + std::to_string(theme.theme_id.value) + " has no root");
        DiscussionTree tree(theme.theme_id, read_node(s));
        while (s.step()) {
            if (s.null(1)) throw Error(ErrorCode::StorageFailure, "stored non-root node without parent");
            tree.attach(read_node(s), NodeId{static_cast<std::uint64_t>(s.integer(1))});
        }

        std::vector<Post> posts;
        auto& p = statement("SELECT id, author_id, parent_post_id, text, satisfaction, created_at, is_agent FROM posts "
                            "WHERE theme_id = ? ORDER BY created_at, id");
        p.bind(as_int(theme.theme_id.value));
        while (p.step()) {
            Post post;
            post.post_id = PostId{static_cast<std::uint64_t>(p.integer(0))};
            post.theme_id = theme.theme_id;
            post.author_id = ParticipantId{static_cast<std::uint64_t>(p.integer(1))};
            if (!p.null(2)) post.parent_post_id = PostId{static_cast<std::uint64_t>(p.integer(2))};
            post.text = p.text(3);
            if (!p.null(4)) post.satisfaction = static_cast<int>(p.integer(4));
            post.created_at = from_epoch_ms(p.integer(5));
            post.is_agent = p.integer(6) != 0;
            posts.push_back(std::move(post));
        }
        out.push_back(StoredTheme{std::move(theme), std::move(state), std::move(tree), std::move(posts)});
    }
    return out;
}

std::map<ParticipantId, std::size_t> Store::load_points()
{
    std::lock_guard lock(mutex_);
    std::map<ParticipantId, std::size_t> out;
    auto& s = statement("SELECT participant_id, points FROM points");
    while (s.step()) out[ParticipantId{static_cast<std::uint64_t>(s.integer(0))}] = static_cast<std::size_t>(s.integer(1));
    return out;
}

}  // namespace ibis
