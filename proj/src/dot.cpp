#include "satlab/dot.hpp"

#include <sstream>

namespace satlab {

std::string export_dot(const Context& ctx, const TransferSystem* ts, const CharSet* u) {
    const auto& lat = ctx.lat();
    std::ostringstream os;
    os << "digraph subgroups {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box];\n";
    for (int i = 0; i < lat.size(); ++i) {
        os << "  s" << i << " [label=\"#" << i << " order " << lat.at(i).order;
        if (u) os << " |U|_H=" << ctx.restrict_set(*u, i).count();
        os << "\"];\n";
    }
    // Hasse covers; covers that are also transfers take the transfer style.
    for (auto [k, h] : lat.covers()) {
        bool strong = ts && ts->rel(k, h);
        os << "  s" << k << " -> s" << h;
        if (strong) os << " [color=red,penwidth=2.0]";
        os << ";\n";
    }
    if (ts) {
        // non-cover transfers, drawn without affecting the layout
        for (auto [k, h] : ts->strict_edges()) {
            bool is_cover = false;
            for (auto [a, b] : lat.covers())
                if (a == k && b == h) is_cover = true;
            if (!is_cover)
                os << "  s" << k << " -> s" << h
                   << " [color=red,penwidth=2.0,constraint=false];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace satlab
