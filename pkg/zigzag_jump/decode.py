"""
置換と組合せ対象の間の全単射。

- ビット列: ピークのない置換 (L_n = S_n(P_1))
- 二分木・Dyck 経路: 231 を回避する置換 (先行順の走査列)
- 集合分割: 1[32] を回避する置換 (下降で区切ったブロック)
ジャンプはそれぞれビット反転・木の回転・要素の移動に対応します。
"""
import logging
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from .perm_core import Direction
from .perm_core import JumpStep
from .perm_core import Permutation
from .perm_core import jump

# ロギング設定
decode_logger = logging.getLogger(__name__)
decode_logger.addHandler(logging.NullHandler())


class DecodeError(Exception):
    """置換がデコーダの定義域に含まれない、または対象が不正な時のエラー。"""
    pass


# --- ビット列 ---

@dataclass(frozen=True)
class BitString:
    """x_2 .. x_n のビット列。bits[0] が x_2。"""
    bits: Tuple[int, ...]

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def perm_to_bits(pi: Permutation) -> BitString:
    """値 n..2 を順に取り除き、左端なら 1、右端なら 0 を記録します。"""
    remaining = list(pi.entries)
    bits = {}
    for value in range(pi.n, 1, -1):
        if remaining[0] == value:
            bits[value] = 1
            remaining.pop(0)
        elif remaining[-1] == value:
            bits[value] = 0
            remaining.pop()
        else:
            raise DecodeError(f"{pi} はピークを持つためビット列に変換できません。")
    return BitString(tuple(bits[v] for v in range(2, pi.n + 1)))


def bits_to_perm(bits: BitString) -> Permutation:
    entries = [1]
    for value, bit in enumerate(bits.bits, start=2):
        if bit not in (0, 1):
            raise DecodeError(f"ビットは 0 か 1 です: {bit}")
        if bit:
            entries.insert(0, value)
        else:
            entries.append(value)
    return Permutation(tuple(entries))


# --- 二分木 ---

@dataclass(frozen=True)
class BinaryTree:
    """ラベル付き二分木のノード。空の部分木は None。"""
    label: int
    left: Optional["BinaryTree"] = None
    right: Optional["BinaryTree"] = None

    def preorder(self) -> List[int]:
        out = [self.label]
        if self.left is not None:
            out.extend(self.left.preorder())
        if self.right is not None:
            out.extend(self.right.preorder())
        return out

    def inorder(self) -> List[int]:
        out = self.left.inorder() if self.left is not None else []
        out.append(self.label)
        if self.right is not None:
            out.extend(self.right.inorder())
        return out

    def __str__(self) -> str:
        if self.left is None and self.right is None:
            return str(self.label)
        left = str(self.left) if self.left is not None else "."
        right = str(self.right) if self.right is not None else "."
        return f"{self.label}({left},{right})"


Tree = Optional[BinaryTree]


def perm_to_tree(pi: Permutation) -> Tree:
    """
    先行順が π となる二分探索木。231 を含む置換は DecodeError。
    """
    return _build_tree(pi.entries, pi)


def _build_tree(values: Sequence[int], pi: Permutation) -> Tree:
    if not values:
        return None
    root, rest = values[0], values[1:]
    split = 0
    while split < len(rest) and rest[split] < root:
        split += 1
    if any(v < root for v in rest[split:]):
        raise DecodeError(f"{pi} は 231 を含むため二分木に変換できません。")
    return BinaryTree(root, _build_tree(rest[:split], pi), _build_tree(rest[split:], pi))


def tree_to_perm(tree: Tree) -> Permutation:
    return Permutation(tuple(tree.preorder()) if tree is not None else ())


@dataclass(frozen=True)
class TreeRotation:
    """node を根とする部分木の回転。RIGHT は左の子を持ち上げ、LEFT は右の子を持ち上げます。"""
    node: int
    direction: Direction

    def __str__(self) -> str:
        side = "right" if self.direction is Direction.RIGHT else "left"
        return f"{side} rotation at {self.node}"


def _parent_of(tree: Tree, label: int) -> Optional[BinaryTree]:
    if tree is None:
        return None
    for child in (tree.left, tree.right):
        if child is not None and child.label == label:
            return tree
    return _parent_of(tree.left, label) or _parent_of(tree.right, label)


def interpret_jump_tree(tree: Tree, step: JumpStep) -> TreeRotation:
    """
    値 i の右ジャンプはノード i での右回転、左ジャンプは i の親 (i はその右の子) での左回転。
    """
    if step.direction is Direction.RIGHT:
        return TreeRotation(step.value, Direction.RIGHT)
    parent = _parent_of(tree, step.value)
    if parent is None or parent.right is None or parent.right.label != step.value:
        raise DecodeError(f"ノード {step.value} は右の子ではないため左回転に対応しません。")
    return TreeRotation(parent.label, Direction.LEFT)


def rotate(tree: Tree, rotation: TreeRotation) -> Tree:
    if tree is None:
        raise DecodeError(f"ノード {rotation.node} が見つかりません。")
    if tree.label == rotation.node:
        if rotation.direction is Direction.RIGHT:
            pivot = tree.left
            if pivot is None:
                raise DecodeError(f"ノード {tree.label} に左の子がないため右回転できません。")
            return BinaryTree(pivot.label, pivot.left, BinaryTree(tree.label, pivot.right, tree.right))
        pivot = tree.right
        if pivot is None:
            raise DecodeError(f"ノード {tree.label} に右の子がないため左回転できません。")
        return BinaryTree(pivot.label, BinaryTree(tree.label, tree.left, pivot.left), pivot.right)
    # 二分探索木のラベルで探索する
    if rotation.node < tree.label:
        return BinaryTree(tree.label, rotate(tree.left, rotation), tree.right)
    return BinaryTree(tree.label, tree.left, rotate(tree.right, rotation))


# --- Dyck 経路 ---

@dataclass(frozen=True)
class DyckPath:
    steps: str

    def __post_init__(self):
        height = 0
        for step in self.steps:
            if step not in "UD":
                raise DecodeError(f"Dyck 経路の文字は U か D です: {step}")
            height += 1 if step == "U" else -1
            if height < 0:
                raise DecodeError(f"Dyck 経路が x 軸を下回ります: {self.steps}")
        if height != 0:
            raise DecodeError(f"Dyck 経路が x 軸に戻りません: {self.steps}")

    def __str__(self) -> str:
        return self.steps


def tree_to_dyck(tree: Tree) -> DyckPath:
    def encode(node: Tree) -> str:
        if node is None:
            return ""
        return "U" + encode(node.left) + "D" + encode(node.right)

    return DyckPath(encode(tree))


def dyck_to_tree(path: DyckPath) -> Tree:
    """tree_to_dyck の逆。ラベルは中間順で 1..n を振ります。"""
    steps = path.steps

    def shape(index: int) -> Tuple[Optional[list], int]:
        if index >= len(steps) or steps[index] == "D":
            return None, index
        left, index = shape(index + 1)
        # steps[index] は対応する D
        right, index = shape(index + 1)
        return [left, right], index

    skeleton, _ = shape(0)
    counter = [0]

    def label(node) -> Tree:
        if node is None:
            return None
        left = label(node[0])
        counter[0] += 1
        own = counter[0]
        right = label(node[1])
        return BinaryTree(own, left, right)

    return label(skeleton)


# --- 集合分割 ---

@dataclass(frozen=True)
class SetPartition:
    """ブロックは最小値の降順、各ブロック内は昇順 (標準形)。"""
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(block)) for block in self.blocks if block)
        blocks = tuple(sorted(blocks, key=lambda block: block[0], reverse=True))
        elements = sorted(v for block in blocks for v in block)
        if elements != list(range(1, len(elements) + 1)):
            raise DecodeError(f"{{1..n}} の分割ではありません: {self.blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_index(self, element: int) -> int:
        for index, block in enumerate(self.blocks):
            if element in block:
                return index
        raise DecodeError(f"要素 {element} は分割に含まれません。")

    def __str__(self) -> str:
        separator = "" if self.n <= 9 else ","
        return "|".join(separator.join(str(v) for v in block) for block in self.blocks)


NEW_SINGLETON = "new"


@dataclass(frozen=True)
class ElementMove:
    """element を source 番目のブロックから target 番目のブロック (または新しい単集合) へ移す。"""
    element: int
    source: int
    target: Union[int, str]

    def __str__(self) -> str:
        target = "new block" if self.target == NEW_SINGLETON else f"block {self.target}"
        return f"move {self.element} from block {self.source} to {target}"


def perm_to_setpart(pi: Permutation) -> SetPartition:
    """下降位置で区切り、各区間をブロックとします。ブロック最小値は降順でなければなりません。"""
    blocks: List[List[int]] = []
    for value in pi.entries:
        if blocks and blocks[-1][-1] < value:
            blocks[-1].append(value)
        else:
            blocks.append([value])
    minima = [block[0] for block in blocks]
    if any(a <= b for a, b in zip(minima, minima[1:])):
        raise DecodeError(f"{pi} は 1[32] を含むため集合分割に変換できません。")
    return SetPartition(tuple(tuple(block) for block in blocks))


def setpart_to_perm(partition: SetPartition) -> Permutation:
    return Permutation(tuple(v for block in partition.blocks for v in block))


def interpret_jump_setpart(partition: SetPartition, step: JumpStep) -> ElementMove:
    """ジャンプ前後の分割を比べ、ジャンプした値がどのブロックへ移ったかを求めます。"""
    before = setpart_to_perm(partition)
    after = perm_to_setpart(jump(before, step.value, step.direction, step.steps))
    element = step.value
    source = partition.block_index(element)
    rest = tuple(v for v in after.blocks[after.block_index(element)] if v != element)
    if not rest:
        return ElementMove(element, source, NEW_SINGLETON)
    for index, block in enumerate(partition.blocks):
        if tuple(v for v in block if v != element) == rest:
            return ElementMove(element, source, index)
    raise DecodeError(f"ジャンプ {step} は単一要素の移動に対応しません: {partition}")


def apply_move(partition: SetPartition, move: ElementMove) -> SetPartition:
    blocks = [list(block) for block in partition.blocks]
    if move.element not in blocks[move.source]:
        raise DecodeError(f"要素 {move.element} はブロック {move.source} にありません。")
    blocks[move.source].remove(move.element)
    if move.target == NEW_SINGLETON:
        blocks.append([move.element])
    else:
        blocks[move.target].append(move.element)
    return SetPartition(tuple(tuple(block) for block in blocks))
