// External classifier client. Wire contract:
//   POST <path>  {"text": "...", "parent_type": "idea"}   (parent_type optional)
//   200          {"node_type": "issue", "confidence": 0.93}

#include "ibis/error.hpp"
#include "ibis/extraction.hpp"

#include <httplib.h>
#include <json.hpp>

namespace ibis {

namespace {

class HttpClassifier final : public Classifier {
public:
    HttpClassifier(ClassifierRef ref, std::chrono::milliseconds timeout) : ref_(std::move(ref)), timeout_(timeout) {}

    Classification classify(const Sentence& sentence, std::optional<NodeType> parent_type) override
    {
        nlohmann::json body{{"text", sentence.text}};
        if (parent_type) body["parent_type"] = to_string(*parent_type);

        httplib::Client client(ref_.host, ref_.port);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);

        auto res = client.Post(ref_.path, body.dump(), "application/json");
        if (!res) {
            throw Error(ErrorCode::ExternalUnavailable,
                        ref_.to_string() + ": " + httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw Error(ErrorCode::ExternalUnavailable, ref_.to_string() + ": HTTP " + std::to_string(res->status));
        }
        try {
            auto reply = nlohmann::json::parse(res->body);
            auto type = parse_node_type(reply.at("node_type").get<std::string>());
            double confidence = reply.at("confidence").get<double>();
            if (!type || !(confidence >= 0.0 && confidence <= 1.0)) {
                throw Error(ErrorCode::ExternalUnavailable, ref_.to_string() + ": invalid classification");
            }
            return {*type, confidence};
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ExternalUnavailable, ref_.to_string() + ": bad response: " + e.what());
        }
    }

    std::string name() const override { return ref_.to_string(); }

private:
    ClassifierRef ref_;
    std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<Classifier> make_classifier(const ClassifierRef& ref, std::chrono::milliseconds timeout)
{
    if (ref.kind == ClassifierRef::Kind::Builtin) return std::make_unique<RuleClassifier>();
    return std::make_unique<HttpClassifier>(ref, timeout);
}

}  // namespace ibis
