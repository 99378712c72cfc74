"""Sample sectional curvatures of both families and of their fiber metrics.

Every coordinate plane and 32 random planes are tried at each grid point.  The
sampled lower bound C is then compared against a grid twice as fine.
"""
from pinchlab import curvature as cv
from pinchlab.metrics import (DomainBox, family1_metric, family2_metric, hat_metric_family1,
                              hat_metric_family2)
from pinchlab.verify import default_box

for metric in (family1_metric(1, 1), family2_metric(3, 7.0)):
    for counts in (64, 128):
        rep = cv.pinch_scan(metric, default_box(counts), 32, seed=0)
        print(f"{metric.family} {metric.params}  grid {counts}^2  "
              f"K in [{rep.min_K:.5f}, {rep.max_K:.3e}]")
    print(f"  least negative sample: {rep.argmax}")

box = DomainBox({"t": (-10.0, 10.0)}, {"t": 2000})
for hat in (hat_metric_family1(1, 1), hat_metric_family2(2, 7.0)):
    rep = cv.pinch_scan(hat, box, 32, seed=0)
    print(f"{hat.family}: K in [{rep.min_K:.5f}, {rep.max_K:.3e}]")
