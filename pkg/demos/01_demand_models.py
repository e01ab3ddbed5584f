"""Two demand models on one demand node.

A demand node buys d units from the cheapest connected outlet. Posting
exactly the competitor price c keeps a match fraction of the volume,
posting under it (on the price grid) a war fraction, posting above it
nothing. The fixed-fraction model uses constant beta and gamma; the
binary-logit variant lets both fractions move with price.
"""

from fractions import Fraction

from netpricing import (
    DemandNode,
    Edge,
    Instance,
    demand_bmnpp,
    demand_mnpp,
    evaluate_prices,
    make_grid,
    money_str,
    number_str,
    parse_money,
)


def main():
    grid = make_grid("0", "12", "1")
    node = DemandNode(
        id=0,
        c=parse_money("8"),
        c_bar=parse_money("2"),
        d=Fraction(100),
        beta=Fraction(1, 2),
        gamma=Fraction(9, 10),
    )
    edge = Edge(e=0, f=0, a_hat=6.0, b_hat=0.8, a_bar=2.0, b_bar=0.3)

    print("price   fixed-fraction   binary-logit")
    for price in grid.prices:
        vol_fixed = demand_mnpp(node, price, grid)
        vol_logit = demand_bmnpp(node, edge, price, grid)
        print(f"{money_str(price):>5}   {str(vol_fixed):>14}   {vol_logit:12.3f}")

    # Matching at c = 8 keeps half the volume at the full price. The war
    # branch of the logit model shuts off below the basket floor c_bar = 2.
    print()
    print("match volume, exact:", demand_mnpp(node, node.c, grid))

    inst = Instance(
        n_outlets=1, demands=(node,), edges=(edge,), grid=grid, model="mnpp"
    )
    for posted in ("8", "7", "9"):
        revenue, alloc, labels = evaluate_prices(inst, (parse_money(posted),))
        tag = labels.get(0, "none")
        print(f"posted {posted:>2}: revenue {number_str(revenue):>7}  regime {tag}")


if __name__ == "__main__":
    main()
