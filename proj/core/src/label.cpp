#include "mhgf/label.hpp"

#include <mutex>
#include <unordered_set>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

struct InternPool {
    std::mutex mutex;
    std::unordered_set<std::string> strings;
};

InternPool& pool() {
    static InternPool* p = new InternPool();
    return *p;
}

const std::string* intern(std::string_view name) {
    auto& p = pool();
    std::lock_guard lock(p.mutex);
    return &*p.strings.emplace(name).first;
}

}  // namespace

Label::Label() : text_(intern("")) {}

Label::Label(std::string_view name) : text_(intern(name)) {
    if (name.empty()) throw StructuralError("label must be non-empty");
}

}  // namespace mhgf
