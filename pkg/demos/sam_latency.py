"""Point and line SAM load costs across a bank, checked against the move-search oracle."""

from lsqca.floorplan import LINE, POINT, LayoutConfig, assign_initial, build_layout
from lsqca.sam import SamState, load_cost
from lsqca.sam.oracle import oracle_load_cost

for kind in (POINT, LINE):
    lay = build_layout(LayoutConfig(kind), 24)
    st = SamState.create(lay, assign_initial(lay))
    bank = lay.banks[0]
    print(f"{kind} SAM, rows {bank.row_lengths}, scan row {bank.center_row}")
    grid = {cell: q for q, cell in st.pos.items()}
    for r, width in enumerate(bank.row_lengths):
        row = []
        for x in range(width):
            q = grid.get((r, x))
            row.append("  ." if q is None else f"{load_cost(st, q):3d}")
        print("  " + "".join(row))
    same = all(load_cost(st, q) == oracle_load_cost(st, q) for q in st.pos)
    print(f"  closed form equals oracle on every cell: {same}\n")
