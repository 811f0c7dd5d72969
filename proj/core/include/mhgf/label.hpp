#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace mhgf {

/// Interned symbolic identifier for vertex and edge labels.
///
/// Equality is pointer equality on the interned string, which coincides with
/// exact string equality. Ordering is lexicographic on the text so that any
/// sort over labels is independent of interning order.
class Label {
public:
    Label();
    explicit Label(std::string_view name);

    const std::string& str() const noexcept { return *text_; }
    bool empty() const noexcept { return text_->empty(); }

    friend bool operator==(Label a, Label b) noexcept { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(Label a, Label b) noexcept {
        if (a.text_ == b.text_) return std::strong_ordering::equal;
        return a.str().compare(b.str()) < 0 ? std::strong_ordering::less
                                            : std::strong_ordering::greater;
    }

    std::size_t hash() const noexcept { return std::hash<const void*>{}(text_); }

private:
    const std::string* text_;
};

}  // namespace mhgf

template <>
struct std::hash<mhgf::Label> {
    std::size_t operator()(mhgf::Label l) const noexcept { return l.hash(); }
};
