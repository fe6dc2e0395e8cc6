import { ScenarioEditor } from "./editor.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");
new ScenarioEditor(root);
