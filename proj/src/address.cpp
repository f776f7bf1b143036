#include "gasket/address.hpp"

#include <cmath>
#include <numbers>

namespace gasket {

namespace {

constexpr double kHalfSqrt3 = 0.8660254037844386467637231707529362;

// Branch offsets in lattice units of the parent side: branch 0 keeps the
// anchor, branch 1 shifts by e1/2, branch 2 by e2/2.
constexpr std::array<std::pair<int, int>, 3> kOffset = {{{0, 0}, {1, 0}, {0, 1}}};

void validate(const Address& a) {
    if (a.blowup < 0) throw DomainError("Address: negative blowup");
    for (auto d : a.digits)
        if (d > 2) throw DomainError("Address: digit outside {0,1,2}");
    if (a.kind == AddressKind::vertex && (a.corner < 0 || a.corner > 2))
        throw DomainError("Address: vertex corner outside {0,1,2}");
}

}  // namespace

LatticeLabel vertex_label(long long n, long long m) {
    long long r = (n + 2 * m) % 3;
    if (r < 0) r += 3;
    return static_cast<LatticeLabel>(r);
}

char label_char(LatticeLabel l) {
    switch (l) {
        case LatticeLabel::u: return 'u';
        case LatticeLabel::v: return 'v';
        default: return 'w';
    }
}

double Address::side() const { return std::ldexp(1.0, blowup - depth()); }

LatticePoint Address::anchor_lattice() const {
    validate(*this);
    // anchor = sum_i offset(d_i) * 2^(m-i), in units of 2^(M-m)
    LatticePoint p;
    for (int i = 0; i < depth(); ++i) {
        long long scale = 1LL << (depth() - 1 - i);
        p.n1 += kOffset[digits[i]].first * scale;
        p.n2 += kOffset[digits[i]].second * scale;
    }
    return p;
}

LatticePoint Address::point_lattice() const {
    LatticePoint p = anchor_lattice();
    if (kind == AddressKind::vertex && corner > 0) {
        p.n1 += kOffset[corner].first;
        p.n2 += kOffset[corner].second;
    }
    return p;
}

std::pair<double, double> lattice_to_plane(LatticePoint p, double unit) {
    return {unit * (static_cast<double>(p.n1) + 0.5 * static_cast<double>(p.n2)),
            unit * kHalfSqrt3 * static_cast<double>(p.n2)};
}

std::pair<double, double> Address::point() const {
    return lattice_to_plane(point_lattice(), side());
}

std::string Address::str() const {
    std::string s = std::to_string(blowup) + ":";
    for (auto d : digits) s.push_back(static_cast<char>('0' + d));
    if (kind == AddressKind::vertex) {
        s.push_back('+');
        s.push_back(static_cast<char>('0' + corner));
    }
    return s;
}

Address Address::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("Address::parse: missing ':'");
    Address a;
    try {
        a.blowup = std::stoi(text.substr(0, colon));
    } catch (const std::exception&) {
        throw DomainError("Address::parse: bad blowup in '" + text + "'");
    }
    std::size_t i = colon + 1;
    for (; i < text.size() && text[i] != '+'; ++i) {
        char c = text[i];
        if (c < '0' || c > '2') throw DomainError("Address::parse: bad digit in '" + text + "'");
        a.digits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (i < text.size()) {  // '+c' vertex suffix
        if (i + 2 != text.size()) throw DomainError("Address::parse: bad vertex suffix");
        a.kind = AddressKind::vertex;
        a.corner = text[i + 1] - '0';
    }
    validate(a);
    return a;
}

double cell_measure(int depth, int blowup) {
    if (depth < 0 || blowup < 0) throw DomainError("cell_measure: negative depth or blowup");
    return std::pow(3.0, blowup - depth);
}

Address project0(const Address& addr) {
    validate(addr);
    const int M = addr.blowup;
    if (M == 0) return addr;
    if (addr.depth() < M)
        throw DomainError("project0: cell of side > 1 spans several unit triangles");
    // Unit triangle selected by the first M digits; its anchor in units of 1.
    LatticePoint anchor;
    for (int i = 0; i < M; ++i) {
        long long scale = 1LL << (M - 1 - i);
        anchor.n1 += kOffset[addr.digits[i]].first * scale;
        anchor.n2 += kOffset[addr.digits[i]].second * scale;
    }
    // The label-matching map is the rotation taking corner k to corner (k+c)%3,
    // where c is the label of the unit triangle's anchor. It permutes the IFS
    // branches by the same cyclic shift.
    const int c = static_cast<int>(vertex_label(anchor.n1, anchor.n2));
    Address out;
    out.blowup = 0;
    out.kind = addr.kind;
    out.digits.reserve(addr.depth() - M);
    for (int i = M; i < addr.depth(); ++i)
        out.digits.push_back(static_cast<std::uint8_t>((addr.digits[i] + c) % 3));
    if (addr.kind == AddressKind::vertex) out.corner = (addr.corner + c) % 3;
    return out;
}

std::vector<Address> enumerate_cells(int blowup, int depth) {
    if (blowup < 0 || depth < 0) throw DomainError("enumerate_cells: negative argument");
    if (depth > 20) throw ResourceError("enumerate_cells: depth guardrail exceeded");
    std::vector<Address> cells;
    long long count = 1;
    for (int i = 0; i < depth; ++i) count *= 3;
    cells.reserve(static_cast<std::size_t>(count));
    Address a;
    a.blowup = blowup;
    a.digits.assign(static_cast<std::size_t>(depth), 0);
    for (long long k = 0; k < count; ++k) {
        long long v = k;
        for (int i = depth - 1; i >= 0; --i) {
            a.digits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v % 3);
            v /= 3;
        }
        cells.push_back(a);
    }
    return cells;
}

bool cells_intersect(const Address& a, const Address& b) {
    // Exact integer test on the common refinement lattice. An upward triangle
    // with anchor (x,y) and side L covers {(p,q): p>=x, q>=y, p+q<=x+y+L}.
    int ua = a.blowup - a.depth();
    int ub = b.blowup - b.depth();
    int u = std::min(ua, ub);
    auto to_common = [u](const Address& addr, int uaddr) {
        LatticePoint p = addr.anchor_lattice();
        long long f = 1LL << (uaddr - u);
        return std::array<long long, 3>{p.n1 * f, p.n2 * f, f};  // x, y, side
    };
    auto ta = to_common(a, ua);
    auto tb = to_common(b, ub);
    long long x = std::max(ta[0], tb[0]);
    long long y = std::max(ta[1], tb[1]);
    long long hi = std::min(ta[0] + ta[1] + ta[2], tb[0] + tb[1] + tb[2]);
    return x + y <= hi;
}

}  // namespace gasket
