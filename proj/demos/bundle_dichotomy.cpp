// Chow ring of P(E) over a curve and the slope dichotomy for endomorphisms
// lying over a base map g.

#include <iostream>

#include "arithdyn/io.hpp"
#include "arithdyn/projbundle.hpp"

using namespace arithdyn;

int main() {
    try {
        ChowRing r(3, Integer(2));
        for (const char* e : {"D^3", "D^2*F", "(D + 2*F)^3"})
            std::cout << e << " = " << io::parse_chow_expression(r, e).str() << "\n";
        std::cout << "\n";

        struct Case {
            const char* label;
            Integer deg_g;
            Rational delta;
            const char* hn;
        };
        for (const Case& c : {Case{"O(2)+O, g of degree 2, delta 2", 2, 2, "[(1,2),(1,0)]"},
                              Case{"O+O, g an isomorphism, delta 4", 1, 4, "[(2,0)]"},
                              Case{"rank 3 over g of degree 4, delta 4", 4, 4, "[(2,0),(1,-1)]"},
                              Case{"rank 3 over g of degree 2, delta 4", 2, 4, "[(2,0),(1,-1)]"}}) {
            HNType hn = io::parse_hn_string(c.hn);
            SlopeStats st = slope_stats(hn);
            BundleEndoData data(static_cast<unsigned>(hn.rank().get_ui()), c.deg_g, c.delta, st.mu_min);
            BundleReport rep = bundle_analyze(data, hn);
            std::cout << c.label << ": f^*D = " << rep.action.image_D(hn.ring()).str()
                      << ", lambda_1 = " << rep.action.lambda1.to_double() << ", degree identity "
                      << (rep.degree.holds ? "holds" : "fails") << ", " << to_string(rep.dichotomy.kind) << "\n";
            for (const auto& note : rep.notes) std::cout << "  note: " << note << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}
